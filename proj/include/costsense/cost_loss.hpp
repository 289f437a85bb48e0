#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "costsense/autograd.hpp"

namespace costsense {

// Per-class misclassification costs derived from the class distribution:
// raw[i] = (1 / counts[i])^gamma. gamma = 0 gives unit costs (the
// cost-insensitive model); gamma = 1 makes the cost inversely proportional
// to class size.
//
// normalized[] rescales raw[] so the mean per-sample weight over the
// training distribution is 1: sum_i counts[i] * normalized[i] == sum_i counts[i].
struct ClassWeights {
  std::vector<std::int64_t> counts;
  double gamma = 0.0;
  std::vector<double> raw;
  std::vector<double> normalized;
  bool normalize = true;

  const std::vector<double>& effective() const noexcept { return normalize ? normalized : raw; }
};

// Throws DataError for a count < 1 and ConfigError for gamma outside [0, 1].
ClassWeights compute_class_weights(std::vector<std::int64_t> counts, double gamma, bool normalize = true);

// Probabilities are clamped into [1e-7, 1 - 1e-7] before the log.
inline constexpr double bce_epsilon = 1e-7;

// Mean over the batch of w[y] * (-y ln p - (1 - y) ln(1 - p)), with w taken
// from weights.normalized or weights.raw per `use_normalized`. probs has
// shape [batch]; labels are 0/1. When `clamped` is non-null it receives the
// number of probabilities that had to be clamped.
template <typename T>
Var<T> weighted_bce(Var<T> probs, std::span<const int> labels, const ClassWeights& weights, bool use_normalized,
                    std::size_t* clamped = nullptr);

// The same loss taken on pre-sigmoid logits, with no clamp. The gradient
// w[y] * (sigmoid(z) - y) / batch stays nonzero for confidently wrong
// samples, whereas a float32 sigmoid that has rounded to exactly 0 or 1
// passes no gradient back through weighted_bce. Used by the trainer.
template <typename T>
Var<T> weighted_bce_logits(Var<T> logits, std::span<const int> labels, const ClassWeights& weights,
                           bool use_normalized);

}  // namespace costsense
