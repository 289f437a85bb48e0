#include "costsense/text.hpp"

#include <algorithm>
#include <set>

#include "costsense/errors.hpp"

namespace costsense {

namespace {

constexpr char32_t replacement_char = 0xFFFD;

}  // namespace

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(replacement_char);
      ++i;
      continue;
    }
    if (i + extra >= text.size()) {
      out.push_back(replacement_char);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t min_for_len[] = {0, 0x80, 0x800, 0x10000};
    if (!ok || cp < min_for_len[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(replacement_char);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) out += encode_utf8(c);
  return out;
}

std::u32string fold_case(std::u32string text) {
  for (auto& c : text) {
    if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
  }
  return text;
}

CharVocabulary CharVocabulary::fit(std::span<const std::string> corpus) {
  if (corpus.empty()) throw DataError("cannot fit a vocabulary on an empty corpus");
  std::set<char32_t> seen;
  for (const auto& text : corpus) {
    for (char32_t c : fold_case(decode_utf8(text))) seen.insert(c);
  }
  return from_chars(std::vector<char32_t>(seen.begin(), seen.end()));
}

CharVocabulary CharVocabulary::from_chars(std::vector<char32_t> chars) {
  for (std::size_t i = 1; i < chars.size(); ++i) {
    if (chars[i - 1] >= chars[i]) throw DataError("vocabulary characters must be unique and sorted");
  }
  CharVocabulary vocab;
  vocab.chars_ = std::move(chars);
  for (std::size_t i = 0; i < vocab.chars_.size(); ++i) {
    vocab.index_.emplace(vocab.chars_[i], static_cast<std::int32_t>(i) + first_char_id);
  }
  return vocab;
}

std::int32_t CharVocabulary::id(char32_t c) const {
  auto it = index_.find(c);
  return it == index_.end() ? oov_id : it->second;
}

std::optional<char32_t> CharVocabulary::char_of(std::int32_t id) const {
  if (id < first_char_id || static_cast<std::size_t>(id) >= size()) return std::nullopt;
  return chars_[static_cast<std::size_t>(id - first_char_id)];
}

std::vector<std::int32_t> encode(std::string_view text, const CharVocabulary& vocab, std::size_t max_len) {
  if (max_len == 0) throw ConfigError("encode: max_len must be at least 1");
  const auto chars = fold_case(decode_utf8(text));
  std::vector<std::int32_t> ids(max_len, CharVocabulary::pad_id);
  const std::size_t keep = std::min(max_len, chars.size());
  for (std::size_t i = 0; i < keep; ++i) ids[i] = vocab.id(chars[i]);
  return ids;
}

std::string decode(std::span<const std::int32_t> ids, const CharVocabulary& vocab) {
  std::u32string out;
  for (auto id : ids) {
    if (auto c = vocab.char_of(id)) out.push_back(*c);
  }
  return encode_utf8(out);
}

EncodedBatch encode_batch(std::span<const std::string> texts, std::span<const int> labels,
                          const CharVocabulary& vocab, std::size_t max_len) {
  if (!labels.empty() && labels.size() != texts.size()) {
    throw ContractError("encode_batch: " + std::to_string(texts.size()) + " texts but " +
                        std::to_string(labels.size()) + " labels");
  }
  EncodedBatch out;
  out.batch = texts.size();
  out.max_len = max_len;
  out.ids.reserve(texts.size() * max_len);
  out.lengths.reserve(texts.size());
  for (const auto& text : texts) {
    auto row = encode(text, vocab, max_len);
    out.ids.insert(out.ids.end(), row.begin(), row.end());
    out.lengths.push_back(decode_utf8(text).size());
  }
  out.labels.assign(labels.begin(), labels.end());
  return out;
}

double oov_rate(std::span<const std::string> texts, const CharVocabulary& vocab) {
  std::size_t total = 0, oov = 0;
  for (const auto& text : texts) {
    for (char32_t c : fold_case(decode_utf8(text))) {
      ++total;
      if (vocab.id(c) == CharVocabulary::oov_id) ++oov;
    }
  }
  return total ? static_cast<double>(oov) / static_cast<double>(total) : 0.0;
}

std::uint64_t NgramCounts::total() const {
  std::uint64_t n = 0;
  for (const auto& [gram, count] : counts) n += count;
  return n;
}

NgramCounts ngram_counts(std::string_view text, int n_lo, int n_hi) {
  if (n_lo < 1 || n_lo > n_hi) {
    throw ConfigError("ngram range must satisfy 1 <= lo <= hi, got " + std::to_string(n_lo) + ".." +
                      std::to_string(n_hi));
  }
  NgramCounts out;
  out.n_lo = n_lo;
  out.n_hi = n_hi;
  const auto chars = fold_case(decode_utf8(text));
  for (int n = n_lo; n <= n_hi; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (chars.size() < un) break;
    for (std::size_t i = 0; i + un <= chars.size(); ++i) {
      ++out.counts[encode_utf8(std::u32string_view(chars).substr(i, un))];
    }
  }
  return out;
}

}  // namespace costsense
