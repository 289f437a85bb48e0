#include "costsense/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "costsense/errors.hpp"

namespace costsense {

std::ptrdiff_t NaiveBayesModel::index_of(std::string_view token) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), token);
  if (it == vocabulary.end() || *it != token) return -1;
  return it - vocabulary.begin();
}

void nb_refresh(NaiveBayesModel& model) {
  if (!(model.alpha > 0) || !std::isfinite(model.alpha)) {
    throw ConfigError("naive bayes: alpha must be positive, got " + std::to_string(model.alpha));
  }
  const double docs = static_cast<double>(model.doc_counts[0] + model.doc_counts[1]);
  const double v = static_cast<double>(model.vocabulary.size());
  for (int c = 0; c < 2; ++c) {
    if (model.doc_counts[c] < 1) throw DataError("naive bayes: class " + std::to_string(c) + " has no documents");
    if (model.token_counts[c].size() != model.vocabulary.size()) {
      throw ContractError("naive bayes: count table does not match vocabulary");
    }
    model.log_prior[c] = std::log(static_cast<double>(model.doc_counts[c]) / docs);
    double total = 0;
    for (double n : model.token_counts[c]) total += n;
    const double denom = std::log(total + model.alpha * v);
    auto& ll = model.log_likelihood[c];
    ll.resize(model.vocabulary.size());
    for (std::size_t i = 0; i < ll.size(); ++i) ll[i] = std::log(model.token_counts[c][i] + model.alpha) - denom;
  }
}

NaiveBayesModel nb_train(std::span<const NgramCounts> documents, std::span<const int> labels, double alpha) {
  if (documents.size() != labels.size()) {
    throw ContractError("nb_train: " + std::to_string(documents.size()) + " documents but " +
                        std::to_string(labels.size()) + " labels");
  }
  NaiveBayesModel model;
  model.alpha = alpha;
  if (!documents.empty()) {
    model.n_lo = documents.front().n_lo;
    model.n_hi = documents.front().n_hi;
  }
  std::map<std::string, std::array<double, 2>> merged;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    const int y = labels[d];
    if (y != 0 && y != 1) throw DataError("nb_train: label must be 0 or 1, got " + std::to_string(y));
    if (documents[d].n_lo != model.n_lo || documents[d].n_hi != model.n_hi) {
      throw ContractError("nb_train: documents use different n-gram ranges");
    }
    ++model.doc_counts[y];
    for (const auto& [token, n] : documents[d].counts) merged[token][y] += n;
  }
  if (model.doc_counts[0] == 0 || model.doc_counts[1] == 0) {
    throw DataError("nb_train: training data must contain both classes");
  }
  model.vocabulary.reserve(merged.size());
  for (auto& counts : model.token_counts) counts.reserve(merged.size());
  for (const auto& [token, n] : merged) {
    model.vocabulary.push_back(token);
    model.token_counts[0].push_back(n[0]);
    model.token_counts[1].push_back(n[1]);
  }
  nb_refresh(model);
  return model;
}

NbPrediction nb_predict(const NaiveBayesModel& model, const NgramCounts& doc) {
  std::array<double, 2> score = model.log_prior;
  for (const auto& [token, n] : doc.counts) {
    const auto i = model.index_of(token);
    if (i < 0) continue;
    for (int c = 0; c < 2; ++c) score[c] += static_cast<double>(n) * model.log_likelihood[c][static_cast<std::size_t>(i)];
  }
  const double top = std::max(score[0], score[1]);
  const double norm = top + std::log(std::exp(score[0] - top) + std::exp(score[1] - top));
  NbPrediction out;
  out.p_malicious = std::exp(score[1] - norm);
  out.label = score[1] > score[0] ? 1 : 0;
  out.posterior = std::exp(score[out.label] - norm);
  return out;
}

}  // namespace costsense
