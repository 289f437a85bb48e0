#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace costsense {

// UTF-8 helpers. Invalid byte sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
std::string encode_utf8(char32_t c);

// ASCII case folding; other code points pass through unchanged.
std::u32string fold_case(std::u32string text);

// Character -> id map. Id 0 is padding, id 1 stands for any character not
// seen when fitting; the fitted characters follow in code-point order.
class CharVocabulary {
 public:
  static constexpr std::int32_t pad_id = 0;
  static constexpr std::int32_t oov_id = 1;
  static constexpr std::int32_t first_char_id = 2;

  // Lower-cased character set of the corpus. Throws DataError when empty.
  static CharVocabulary fit(std::span<const std::string> corpus);
  // Rebuilds a vocabulary from characters listed in id order (as stored in a
  // checkpoint). Throws DataError unless they are strictly increasing.
  static CharVocabulary from_chars(std::vector<char32_t> chars);

  std::int32_t id(char32_t c) const;
  std::optional<char32_t> char_of(std::int32_t id) const;
  std::size_t size() const noexcept { return chars_.size() + first_char_id; }
  const std::vector<char32_t>& chars() const noexcept { return chars_; }

  friend bool operator==(const CharVocabulary& a, const CharVocabulary& b) { return a.chars_ == b.chars_; }

 private:
  std::vector<char32_t> chars_;
  std::unordered_map<char32_t, std::int32_t> index_;
};

// Lower-cases, maps characters (unknown -> OOV), keeps the first `max_len`
// characters and right-pads with PAD.
std::vector<std::int32_t> encode(std::string_view text, const CharVocabulary& vocab, std::size_t max_len);

// Inverse of encode over ids >= 2; PAD and OOV ids are skipped.
std::string decode(std::span<const std::int32_t> ids, const CharVocabulary& vocab);

// Fixed-length id matrix for a batch of texts.
struct EncodedBatch {
  std::size_t batch = 0;
  std::size_t max_len = 0;
  std::vector<std::int32_t> ids;     // row-major [batch x max_len]
  std::vector<std::size_t> lengths;  // character count before truncation
  std::vector<int> labels;           // empty when unlabeled

  std::span<const std::int32_t> row(std::size_t i) const {
    return std::span<const std::int32_t>(ids).subspan(i * max_len, max_len);
  }
};

EncodedBatch encode_batch(std::span<const std::string> texts, std::span<const int> labels,
                          const CharVocabulary& vocab, std::size_t max_len);

// Fraction of characters in `texts` that map to OOV.
double oov_rate(std::span<const std::string> texts, const CharVocabulary& vocab);

struct NgramCounts {
  std::map<std::string, std::uint32_t> counts;
  int n_lo = 1;
  int n_hi = 1;

  std::uint64_t total() const;
};

// Character n-grams for every n in [n_lo, n_hi] on the lower-cased text,
// counted with overlap. Throws ConfigError unless 1 <= n_lo <= n_hi.
NgramCounts ngram_counts(std::string_view text, int n_lo, int n_hi);

}  // namespace costsense
