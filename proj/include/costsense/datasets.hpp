#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace costsense {

enum class UseCase { dga, email, url };
enum class Split { train, test };

std::string_view use_case_name(UseCase u);
UseCase parse_use_case(std::string_view name);  // ConfigError
std::string_view split_name(Split s);
Split parse_split(std::string_view name);  // ConfigError

// Labels: 0 legitimate, 1 malicious / spam.
struct LabeledDataset {
  std::vector<std::string> texts;
  std::vector<int> labels;
  std::optional<UseCase> use_case;
  Split split = Split::train;

  std::size_t size() const { return texts.size(); }
  bool empty() const { return texts.empty(); }
};

// RFC-4180 CSV with header `text,label`. Rejects duplicate texts.
LabeledDataset load_csv(const std::filesystem::path& path, Split split = Split::train,
                        std::optional<UseCase> use_case = std::nullopt);
LabeledDataset parse_csv(std::string_view content, Split split = Split::train,
                         std::optional<UseCase> use_case = std::nullopt);
std::string to_csv(const LabeledDataset& data);
void save_csv(const LabeledDataset& data, const std::filesystem::path& path);

// [legitimate, malicious]
std::array<std::int64_t, 2> class_counts(const LabeledDataset& data);

// DataError if any text appears in both.
void check_disjoint(const LabeledDataset& train, const LabeledDataset& test);

// 100 for dga and url, 500 for email.
std::size_t default_max_len(UseCase u);

// Full-size corpus class counts, [legitimate, malicious].
struct CorpusManifest {
  UseCase use_case;
  std::array<std::int64_t, 2> train;
  std::array<std::int64_t, 2> test;
};
const CorpusManifest& corpus_manifest(UseCase u);

struct LengthRange {
  std::size_t lo = 1;
  std::size_t hi = 1;
};

struct GeneratorConfig {
  UseCase use_case = UseCase::dga;
  std::int64_t n_legit = 0;
  std::int64_t n_malicious = 0;
  std::uint64_t seed = 0;
  Split split = Split::train;
  LengthRange legit;      // dga: words; url: path segments; email: words
  LengthRange malicious;  // dga: characters; url: path characters; email: words

  static GeneratorConfig defaults(UseCase u);
};

void validate(const GeneratorConfig& config);  // ConfigError

// Pure function of the config. Train and test corpora drawn with the same
// seed never share a text.
LabeledDataset gen_synthetic(const GeneratorConfig& config);

// Linear congruential generator, x <- (1103515245 x + 12345) mod 2^31.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed);
  std::uint32_t next();
  // high bits: (x * n) >> 31
  std::uint32_t below(std::uint32_t n);

 private:
  std::uint32_t state_;
};

// Shannon entropy in bits of the character 1-gram distribution.
double char_entropy(std::string_view text);

}  // namespace costsense
