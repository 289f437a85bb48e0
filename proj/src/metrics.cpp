#include "costsense/metrics.hpp"

#include <string>

#include "costsense/errors.hpp"

namespace costsense {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ContractError("confusion: " + std::to_string(a) + " predictions but " + std::to_string(b) + " labels");
  }
}

void tally(ConfusionMatrix& cm, bool positive, int label) {
  if (label != 0 && label != 1) throw ContractError("confusion: label must be 0 or 1, got " + std::to_string(label));
  if (label == 1) {
    ++(positive ? cm.tp : cm.fn);
  } else {
    ++(positive ? cm.fp : cm.tn);
  }
}

}  // namespace

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  tp += o.tp;
  return *this;
}

template <typename T>
ConfusionMatrix confusion(std::span<const T> probs, std::span<const int> labels, double threshold) {
  check_lengths(probs.size(), labels.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < probs.size(); ++i) tally(cm, static_cast<double>(probs[i]) >= threshold, labels[i]);
  return cm;
}

ConfusionMatrix confusion_from_labels(std::span<const int> predicted, std::span<const int> labels) {
  check_lengths(predicted.size(), labels.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predicted.size(); ++i) tally(cm, predicted[i] == 1, labels[i]);
  return cm;
}

Scores scores(const ConfusionMatrix& cm) {
  if (cm.tn < 0 || cm.fp < 0 || cm.fn < 0 || cm.tp < 0) throw ContractError("scores: negative count");
  if (cm.total() == 0) throw ContractError("scores: empty confusion matrix");
  const auto tn = static_cast<double>(cm.tn), fp = static_cast<double>(cm.fp);
  const auto fn = static_cast<double>(cm.fn), tp = static_cast<double>(cm.tp);
  Scores s;
  s.accuracy = (tp + tn) / (tp + tn + fp + fn);
  s.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  s.accuracy *= 100;
  s.precision *= 100;
  s.recall *= 100;
  s.f1 *= 100;
  return s;
}

nlohmann::json metrics_json(const ConfusionMatrix& cm) {
  const auto s = scores(cm);
  return {{"accuracy", s.accuracy}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"tn", cm.tn},            {"fp", cm.fp},               {"fn", cm.fn},         {"tp", cm.tp}};
}

template ConfusionMatrix confusion(std::span<const float>, std::span<const int>, double);
template ConfusionMatrix confusion(std::span<const double>, std::span<const int>, double);

}  // namespace costsense
