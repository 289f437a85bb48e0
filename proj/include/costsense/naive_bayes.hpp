#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "costsense/text.hpp"

namespace costsense {

// Multinomial Naive Bayes over character n-gram counts. The raw counts are
// the state; log tables are derived from them so a reload reproduces them
// exactly.
struct NaiveBayesModel {
  double alpha = 1.0;
  int n_lo = 1;
  int n_hi = 2;
  std::array<std::int64_t, 2> doc_counts{};
  std::vector<std::string> vocabulary;                 // sorted, union over training docs
  std::array<std::vector<double>, 2> token_counts;     // [class][vocabulary index]
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_likelihood;

  // index into `vocabulary`, or -1
  std::ptrdiff_t index_of(std::string_view token) const;
};

// Rebuilds priors and likelihoods from the count fields.
void nb_refresh(NaiveBayesModel& model);

NaiveBayesModel nb_train(std::span<const NgramCounts> documents, std::span<const int> labels, double alpha = 1.0);

struct NbPrediction {
  int label = 0;
  double posterior = 0;    // of `label`
  double p_malicious = 0;  // of class 1
};

NbPrediction nb_predict(const NaiveBayesModel& model, const NgramCounts& doc);

}  // namespace costsense
