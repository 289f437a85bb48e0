#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "costsense/checkpoint.hpp"
#include "costsense/cost_loss.hpp"
#include "costsense/datasets.hpp"
#include "costsense/metrics.hpp"

namespace costsense {

struct TrainConfig {
  Preset preset = Preset::cnn;
  double learning_rate = 0.01;
  int epochs = 100;
  std::size_t batch_size = 64;
  double gamma = 1.0;
  bool normalize_weights = true;
  std::uint64_t seed = 1;
  std::size_t max_len = 100;
  int eval_every = 0;  // 0: never
  PresetDims dims;

  nlohmann::json to_json() const;
};

void validate(const TrainConfig& config);  // ConfigError

template <typename T>
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t t = 0;
  std::vector<Tensor<T>> m;
  std::vector<Tensor<T>> v;

  static AdamState fresh(const std::vector<Tensor<T>*>& params);
};

// One Adam update with bias correction; params[i] -= lr * mhat / (sqrt(vhat) + eps).
template <typename T>
void adam_step(const std::vector<Tensor<T>*>& params, const std::vector<Tensor<T>>& grads, AdamState<T>& state,
               double lr);

// Consecutive slices of `order`. A trailing slice of one sample is folded
// into the previous batch since batchnorm needs two rows.
std::vector<std::span<const std::size_t>> minibatches(std::span<const std::size_t> order, std::size_t size);

struct TrainOptions {
  // Replaces the class weights derived from the data and gamma.
  std::optional<ClassWeights> weights_override;
  // Evaluated every `eval_every` epochs when set.
  const LabeledDataset* eval_set = nullptr;
  std::function<void(const EpochRecord&)> on_epoch;
};

// Cost-sensitive when gamma > 0; gamma = 0 is the cost-insensitive path.
Checkpoint train(const LabeledDataset& data, const TrainConfig& config, const TrainOptions& options = {});

struct NbConfig {
  double alpha = 1.0;
  int n_lo = 1;
  int n_hi = 2;
};

Checkpoint train_naive_bayes(const LabeledDataset& data, const NbConfig& config);

struct Evaluation {
  ConfusionMatrix confusion;
  nlohmann::json metrics;
  double oov_rate = 0;
  std::vector<std::string> warnings;
};

Evaluation evaluate(const Checkpoint& ckpt, const LabeledDataset& data);

struct Prediction {
  double probability = 0;  // of class 1
  int label = 0;
};

std::vector<Prediction> predict(const Checkpoint& ckpt, std::span<const std::string> texts);

}  // namespace costsense
