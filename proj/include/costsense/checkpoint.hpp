#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "costsense/datasets.hpp"
#include "costsense/model.hpp"
#include "costsense/naive_bayes.hpp"
#include "costsense/text.hpp"

namespace costsense {

enum class ModelKind { neural, naive_bayes };

std::string_view model_kind_name(ModelKind k);

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0;
  std::optional<nlohmann::json> metrics;  // when evaluated that epoch

  bool operator==(const EpochRecord&) const = default;
};

struct Checkpoint {
  ModelKind kind = ModelKind::neural;
  std::optional<UseCase> use_case;
  nlohmann::json hyperparameters = nlohmann::json::object();
  std::vector<EpochRecord> history;

  // neural
  Preset preset = Preset::cnn;
  PresetDims dims;
  std::size_t max_len = 0;
  CharVocabulary vocab;
  Parameters<float> params;

  // naive_bayes
  NaiveBayesModel nb;

  Model<float> model() const;  // ContractError for naive_bayes
};

// Header JSON, a NUL byte, then little-endian float32 blobs in manifest order.
std::string serialize(const Checkpoint& ckpt);
Checkpoint deserialize(std::string_view bytes);

void save(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load(const std::filesystem::path& path);

inline constexpr int checkpoint_format_version = 1;

}  // namespace costsense
