#pragma once

#include <cstdint>
#include <span>

#include <json.hpp>

namespace costsense {

// Positive class is 1 (malicious / spam).
struct ConfusionMatrix {
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tp = 0;

  std::int64_t total() const { return tn + fp + fn + tp; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Positive iff prob >= threshold.
template <typename T>
ConfusionMatrix confusion(std::span<const T> probs, std::span<const int> labels, double threshold = 0.5);

ConfusionMatrix confusion_from_labels(std::span<const int> predicted, std::span<const int> labels);

// Percentages.
struct Scores {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

Scores scores(const ConfusionMatrix& cm);

// Flat object: accuracy, precision, recall, f1, tn, fp, fn, tp.
nlohmann::json metrics_json(const ConfusionMatrix& cm);

}  // namespace costsense
