#include "costsense/cost_loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "costsense/errors.hpp"

namespace costsense {

ClassWeights compute_class_weights(std::vector<std::int64_t> counts, double gamma, bool normalize) {
  if (counts.empty()) throw DataError("class weights need at least one class count");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1) {
      throw DataError("class " + std::to_string(i) + " has count " + std::to_string(counts[i]) + "; counts must be >= 1");
    }
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in [0, 1], got " + std::to_string(gamma));

  ClassWeights w;
  w.counts = std::move(counts);
  w.gamma = gamma;
  w.normalize = normalize;
  double total = 0.0, weighted = 0.0;
  for (auto n : w.counts) {
    const double raw = std::pow(1.0 / static_cast<double>(n), gamma);
    w.raw.push_back(raw);
    total += static_cast<double>(n);
    weighted += static_cast<double>(n) * raw;
  }
  const double scale = total / weighted;
  for (double raw : w.raw) w.normalized.push_back(raw * scale);
  return w;
}

namespace {

template <typename T>
std::vector<T> sample_weights(const char* op, std::size_t batch, std::span<const int> labels,
                              const ClassWeights& weights, bool use_normalized) {
  if (labels.size() != batch) {
    throw ContractError(std::string(op) + ": " + std::to_string(batch) + " predictions but " +
                        std::to_string(labels.size()) + " labels");
  }
  const auto& table = use_normalized ? weights.normalized : weights.raw;
  std::vector<T> w(batch);
  for (std::size_t s = 0; s < batch; ++s) {
    const int y = labels[s];
    if (y != 0 && y != 1) throw ContractError(std::string(op) + ": label " + std::to_string(y) + " is not binary");
    if (static_cast<std::size_t>(y) >= table.size()) {
      throw ContractError(std::string(op) + ": no weight for class " + std::to_string(y));
    }
    w[s] = static_cast<T>(table[static_cast<std::size_t>(y)]);
  }
  return w;
}

}  // namespace

template <typename T>
Var<T> weighted_bce(Var<T> probs, std::span<const int> labels, const ClassWeights& weights, bool use_normalized,
                    std::size_t* clamped) {
  const auto& pv = probs.value();
  if (pv.rank() != 1) throw DimensionError("weighted_bce: probabilities must be a vector, got " + shape_str(pv.shape()));
  const std::size_t batch = pv.numel();
  auto w = sample_weights<T>("weighted_bce", batch, labels, weights, use_normalized);

  const T lo = static_cast<T>(bce_epsilon);
  const T hi = T{1} - lo;
  std::size_t n_clamped = 0;
  T acc{0};
  std::vector<T> p(batch);
  for (std::size_t s = 0; s < batch; ++s) {
    const T raw = pv[s];
    p[s] = std::clamp(raw, lo, hi);
    if (p[s] != raw) ++n_clamped;
    const T term = labels[s] == 1 ? -std::log(p[s]) : -std::log(T{1} - p[s]);
    acc += w[s] * term;
  }
  if (clamped) *clamped = n_clamped;
  const T inv_batch = T{1} / static_cast<T>(batch);
  std::vector<int> y(labels.begin(), labels.end());
  return probs.tape->record(
      Tensor<T>::scalar(acc * inv_batch), {probs},
      // The derivative is taken at the clamped probability, so saturated
      // outputs still receive a corrective gradient.
      [w = std::move(w), p = std::move(p), y = std::move(y), inv_batch](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        const T g = ctx.dout[0] * inv_batch;
        auto d = ctx.din[0]->mutable_data();
        for (std::size_t s = 0; s < d.size(); ++s) {
          d[s] += g * w[s] * (y[s] == 1 ? -T{1} / p[s] : T{1} / (T{1} - p[s]));
        }
      },
      "weighted_bce");
}

template <typename T>
Var<T> weighted_bce_logits(Var<T> logits, std::span<const int> labels, const ClassWeights& weights,
                           bool use_normalized) {
  const auto& zv = logits.value();
  if (zv.rank() != 1) throw DimensionError("weighted_bce_logits: logits must be a vector, got " + shape_str(zv.shape()));
  const std::size_t batch = zv.numel();
  auto w = sample_weights<T>("weighted_bce_logits", batch, labels, weights, use_normalized);
  std::vector<T> p(batch);
  T acc{0};
  for (std::size_t s = 0; s < batch; ++s) {
    const T z = zv[s];
    // -y ln sigmoid(z) - (1 - y) ln(1 - sigmoid(z)) = max(z, 0) - y z + ln(1 + e^-|z|)
    acc += w[s] * (std::max(z, T{0}) - (labels[s] == 1 ? z : T{0}) + std::log1p(std::exp(-std::abs(z))));
    p[s] = z >= T{0} ? T{1} / (T{1} + std::exp(-z)) : std::exp(z) / (T{1} + std::exp(z));
  }
  const T inv_batch = T{1} / static_cast<T>(batch);
  std::vector<int> y(labels.begin(), labels.end());
  return logits.tape->record(
      Tensor<T>::scalar(acc * inv_batch), {logits},
      [w = std::move(w), p = std::move(p), y = std::move(y), inv_batch](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        const T g = ctx.dout[0] * inv_batch;
        auto d = ctx.din[0]->mutable_data();
        for (std::size_t s = 0; s < d.size(); ++s) d[s] += g * w[s] * (p[s] - static_cast<T>(y[s]));
      },
      "weighted_bce_logits");
}

template Var<float> weighted_bce(Var<float>, std::span<const int>, const ClassWeights&, bool, std::size_t*);
template Var<double> weighted_bce(Var<double>, std::span<const int>, const ClassWeights&, bool, std::size_t*);
template Var<float> weighted_bce_logits(Var<float>, std::span<const int>, const ClassWeights&, bool);
template Var<double> weighted_bce_logits(Var<double>, std::span<const int>, const ClassWeights&, bool);

}  // namespace costsense
