#include "costsense/datasets.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "costsense/errors.hpp"
#include "wordlist.hpp"

namespace costsense {

std::string_view use_case_name(UseCase u) {
  switch (u) {
    case UseCase::dga: return "dga";
    case UseCase::email: return "email";
    case UseCase::url: return "url";
  }
  return "?";
}

UseCase parse_use_case(std::string_view name) {
  for (auto u : {UseCase::dga, UseCase::email, UseCase::url}) {
    if (use_case_name(u) == name) return u;
  }
  throw ConfigError("unknown use case '" + std::string(name) + "' (expected dga, email or url)");
}

std::string_view split_name(Split s) { return s == Split::train ? "train" : "test"; }

Split parse_split(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "test") return Split::test;
  throw ConfigError("unknown split '" + std::string(name) + "' (expected train or test)");
}

namespace {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// RFC-4180: fields separated by commas, records by LF or CRLF; quoted
// fields may contain commas, quotes ("") and line breaks.
std::vector<Record> read_records(std::string_view s) {
  std::vector<Record> out;
  std::size_t i = 0, line = 1;
  if (s.starts_with("\xEF\xBB\xBF")) i = 3;
  while (i < s.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool end_of_record = false;
    while (!end_of_record) {
      field.clear();
      if (i < s.size() && s[i] == '"') {
        const std::size_t opened = line;
        ++i;
        for (;;) {
          if (i >= s.size()) throw ParseError("unterminated quoted field", opened);
          const char c = s[i++];
          if (c == '"') {
            if (i < s.size() && s[i] == '"') {
              field += '"';
              ++i;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field += c;
          }
        }
        if (i < s.size() && s[i] != ',' && s[i] != '\n' && s[i] != '\r') {
          throw ParseError("unexpected character after closing quote", line);
        }
      } else {
        while (i < s.size() && s[i] != ',' && s[i] != '\n' && s[i] != '\r') {
          if (s[i] == '"') throw ParseError("quote inside unquoted field", line);
          field += s[i++];
        }
      }
      rec.fields.push_back(field);
      if (i >= s.size()) {
        end_of_record = true;
      } else if (s[i] == ',') {
        ++i;
      } else {
        if (s[i] == '\r') {
          ++i;
          if (i < s.size() && s[i] != '\n') throw ParseError("bare carriage return", line);
        }
        if (i < s.size()) ++i;  // '\n'
        ++line;
        end_of_record = true;
      }
    }
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
    if (!blank) out.push_back(std::move(rec));
  }
  return out;
}

bool needs_quotes(std::string_view field) { return field.find_first_of(",\"\r\n") != std::string_view::npos; }

void write_field(std::string& out, std::string_view field) {
  if (!needs_quotes(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

LabeledDataset parse_csv(std::string_view content, Split split, std::optional<UseCase> use_case) {
  const auto records = read_records(content);
  if (records.empty()) throw ParseError("missing header `text,label`", 1);
  const auto& header = records.front();
  if (header.fields != std::vector<std::string>{"text", "label"}) {
    throw ParseError("header must be `text,label`", header.line);
  }
  LabeledDataset data;
  data.split = split;
  data.use_case = use_case;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != 2) {
      throw ParseError("expected 2 fields, found " + std::to_string(rec.fields.size()), rec.line);
    }
    const auto& label = rec.fields[1];
    if (label != "0" && label != "1") throw ParseError("label must be 0 or 1, got '" + label + "'", rec.line);
    auto [it, fresh] = seen.emplace(rec.fields[0], rec.line);
    if (!fresh) {
      throw DataError("line " + std::to_string(rec.line) + ": duplicate text (first seen on line " +
                      std::to_string(it->second) + ")");
    }
    data.texts.push_back(rec.fields[0]);
    data.labels.push_back(label == "1" ? 1 : 0);
  }
  return data;
}

LabeledDataset load_csv(const std::filesystem::path& path, Split split, std::optional<UseCase> use_case) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), split, use_case);
}

std::string to_csv(const LabeledDataset& data) {
  if (data.texts.size() != data.labels.size()) throw ContractError("to_csv: texts and labels differ in length");
  std::string out = "text,label\n";
  for (std::size_t i = 0; i < data.texts.size(); ++i) {
    write_field(out, data.texts[i]);
    out += data.labels[i] == 1 ? ",1\n" : ",0\n";
  }
  return out;
}

void save_csv(const LabeledDataset& data, const std::filesystem::path& path) {
  const auto csv = to_csv(data);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

std::array<std::int64_t, 2> class_counts(const LabeledDataset& data) {
  std::array<std::int64_t, 2> counts{0, 0};
  for (int y : data.labels) {
    if (y != 0 && y != 1) throw DataError("label must be 0 or 1, got " + std::to_string(y));
    ++counts[static_cast<std::size_t>(y)];
  }
  return counts;
}

void check_disjoint(const LabeledDataset& train, const LabeledDataset& test) {
  std::unordered_set<std::string_view> seen(train.texts.begin(), train.texts.end());
  for (const auto& t : test.texts) {
    if (seen.count(t)) throw DataError("train and test splits share the text '" + t + "'");
  }
}

std::size_t default_max_len(UseCase u) { return u == UseCase::email ? 500 : 100; }

const CorpusManifest& corpus_manifest(UseCase u) {
  static const CorpusManifest dga{UseCase::dga, {38276, 53052}, {12753, 17690}};
  static const CorpusManifest email{UseCase::email, {19337, 24665}, {8153, 10706}};
  static const CorpusManifest url{UseCase::url, {23374, 11116}, {1142, 578}};
  switch (u) {
    case UseCase::dga: return dga;
    case UseCase::email: return email;
    case UseCase::url: return url;
  }
  throw ConfigError("unknown use case");
}

Lcg::Lcg(std::uint64_t seed) : state_(static_cast<std::uint32_t>(seed & 0x7fffffffu)) {}

std::uint32_t Lcg::next() {
  state_ = static_cast<std::uint32_t>((1103515245ull * state_ + 12345ull) & 0x7fffffffull);
  return state_;
}

std::uint32_t Lcg::below(std::uint32_t n) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(next()) * n) >> 31);
}

GeneratorConfig GeneratorConfig::defaults(UseCase u) {
  GeneratorConfig c;
  c.use_case = u;
  switch (u) {
    case UseCase::dga:
      c.legit = {2, 3};
      c.malicious = {12, 20};
      break;
    case UseCase::url:
      c.legit = {0, 3};
      c.malicious = {20, 60};
      break;
    case UseCase::email:
      c.legit = {20, 60};
      c.malicious = {20, 60};
      break;
  }
  return c;
}

void validate(const GeneratorConfig& c) {
  if (c.n_legit < 1 || c.n_malicious < 1) {
    throw ConfigError("generator: both class counts must be at least 1, got " + std::to_string(c.n_legit) + " and " +
                      std::to_string(c.n_malicious));
  }
  for (const auto& [name, r] : {std::pair{"legitimate", c.legit}, std::pair{"malicious", c.malicious}}) {
    if (r.lo > r.hi) throw ConfigError(std::string("generator: empty ") + name + " length range");
  }
  if (c.use_case == UseCase::dga && (c.legit.lo < 1 || c.malicious.lo < 1)) {
    throw ConfigError("generator: dga lengths must be at least 1");
  }
  if (c.use_case == UseCase::email && (c.legit.lo < 1 || c.malicious.lo < 1)) {
    throw ConfigError("generator: emails need at least one word");
  }
  if (c.use_case == UseCase::url && c.malicious.lo < 1) throw ConfigError("generator: url paths need at least one character");
}

namespace {

constexpr std::string_view lower_alnum = "abcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::string_view mixed_alnum = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class Drawer {
 public:
  explicit Drawer(std::uint64_t seed) : lcg_(seed) {}

  std::size_t in(LengthRange r) { return r.lo + lcg_.below(static_cast<std::uint32_t>(r.hi - r.lo + 1)); }
  bool chance(std::uint32_t one_in) { return lcg_.below(one_in) == 0; }
  std::string_view pick(const std::vector<std::string_view>& words) {
    return words[lcg_.below(static_cast<std::uint32_t>(words.size()))];
  }
  std::string random_chars(std::string_view alphabet, std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += alphabet[lcg_.below(static_cast<std::uint32_t>(alphabet.size()))];
    return s;
  }
  Lcg& lcg() { return lcg_; }

 private:
  Lcg lcg_;
};

std::string dga_legit(Drawer& d, const GeneratorConfig& c) {
  std::string s;
  const std::size_t words = d.in(c.legit);
  for (std::size_t i = 0; i < words; ++i) {
    if (i > 0 && d.chance(8)) s += '-';
    s += d.pick(wordlist::common());
  }
  return s + "." + std::string(d.pick(wordlist::tlds()));
}

std::string dga_malicious(Drawer& d, const GeneratorConfig& c) {
  return d.random_chars(lower_alnum, d.in(c.malicious)) + "." + std::string(d.pick(wordlist::tlds()));
}

std::string url_legit(Drawer& d, const GeneratorConfig& c) {
  std::string s = d.chance(2) ? "https://" : "http://";
  if (d.chance(2)) s += "www.";
  s += d.pick(wordlist::common());
  if (d.chance(2)) s += d.pick(wordlist::common());
  s += "." + std::string(d.pick(wordlist::tlds()));
  const std::size_t segments = d.in(c.legit);
  for (std::size_t i = 0; i < segments; ++i) {
    s += '/';
    s += d.pick(wordlist::common());
  }
  if (segments > 0 && d.chance(4)) s += ".html";
  return s;
}

std::string url_malicious(Drawer& d, const GeneratorConfig& c) {
  std::string s = d.chance(2) ? "https://" : "http://";
  if (d.chance(4)) {
    for (int i = 0; i < 4; ++i) s += (i ? "." : "") + std::to_string(d.lcg().below(256));
  } else {
    s += d.random_chars(lower_alnum, d.in({8, 16})) + "." + std::string(d.pick(wordlist::tlds()));
  }
  const std::size_t n = d.in(c.malicious);
  s += '/';
  for (std::size_t i = 0; i < n; ++i) s += d.chance(10) ? '/' : mixed_alnum[d.lcg().below(static_cast<std::uint32_t>(mixed_alnum.size()))];
  s += "?" + d.random_chars(lower_alnum, d.in({2, 6})) + "=" + d.random_chars(mixed_alnum, d.in({8, 24}));
  return s;
}

std::string email(Drawer& d, const LengthRange& words, const std::vector<std::string_view>& topical) {
  std::string s;
  const std::size_t n = d.in(words);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) s += d.chance(12) ? ", " : " ";
    s += d.chance(3) ? d.pick(topical) : d.pick(wordlist::common());
  }
  return s + ".";
}

std::string draw(Drawer& d, const GeneratorConfig& c, int label) {
  switch (c.use_case) {
    case UseCase::dga: return label ? dga_malicious(d, c) : dga_legit(d, c);
    case UseCase::url: return label ? url_malicious(d, c) : url_legit(d, c);
    case UseCase::email: return email(d, label ? c.malicious : c.legit, label ? wordlist::spam() : wordlist::ham());
  }
  return {};
}

}  // namespace

LabeledDataset gen_synthetic(const GeneratorConfig& c) {
  validate(c);
  Drawer d(c.seed);
  LabeledDataset data;
  data.use_case = c.use_case;
  data.split = c.split;
  // a text belongs to the train split iff its hash is even
  const std::uint64_t parity = c.split == Split::train ? 0 : 1;
  std::unordered_set<std::string> seen;
  for (int label : {0, 1}) {
    const std::int64_t want = label ? c.n_malicious : c.n_legit;
    const std::int64_t budget = 1000 + 100 * want;
    std::int64_t attempts = 0;
    for (std::int64_t got = 0; got < want;) {
      if (++attempts > budget) {
        throw ConfigError("generator: cannot draw " + std::to_string(want) + " distinct " +
                          (label ? "malicious" : "legitimate") + " samples with these length ranges");
      }
      auto text = draw(d, c, label);
      if ((fnv1a(text) & 1u) != parity || !seen.insert(text).second) continue;
      data.texts.push_back(std::move(text));
      data.labels.push_back(label);
      ++got;
    }
  }
  for (std::size_t i = data.texts.size(); i > 1; --i) {
    const std::size_t j = d.lcg().below(static_cast<std::uint32_t>(i));
    std::swap(data.texts[i - 1], data.texts[j]);
    std::swap(data.labels[i - 1], data.labels[j]);
  }
  return data;
}

double char_entropy(std::string_view text) {
  if (text.empty()) return 0.0;
  std::array<std::size_t, 256> counts{};
  for (unsigned char c : text) ++counts[c];
  double h = 0;
  const double n = static_cast<double>(text.size());
  for (auto k : counts) {
    if (k == 0) continue;
    const double p = static_cast<double>(k) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace costsense
