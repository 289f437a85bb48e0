#include "costsense/trainer.hpp"

#include <cmath>
#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

#include "costsense/errors.hpp"

namespace costsense {

using nlohmann::json;

nlohmann::json TrainConfig::to_json() const {
  return {{"preset", preset_name(preset)},
          {"learning_rate", learning_rate},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"gamma", gamma},
          {"normalize_weights", normalize_weights},
          {"seed", seed},
          {"max_len", max_len},
          {"eval_every", eval_every},
          {"optimizer", {{"name", "adam"}, {"beta1", 0.9}, {"beta2", 0.999}, {"epsilon", 1e-8}}}};
}

void validate(const TrainConfig& c) {
  if (!(c.learning_rate > 0) || !std::isfinite(c.learning_rate)) {
    throw ConfigError("learning rate must be positive, got " + std::to_string(c.learning_rate));
  }
  if (c.epochs < 1) throw ConfigError("epochs must be at least 1, got " + std::to_string(c.epochs));
  if (c.batch_size < 2) throw ConfigError("batch size must be at least 2, got " + std::to_string(c.batch_size));
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1], got " + std::to_string(c.gamma));
  if (c.eval_every < 0) throw ConfigError("eval_every must be non-negative");
}

template <typename T>
AdamState<T> AdamState<T>::fresh(const std::vector<Tensor<T>*>& params) {
  AdamState s;
  for (const auto* p : params) {
    s.m.emplace_back(p->shape());
    s.v.emplace_back(p->shape());
  }
  return s;
}

template <typename T>
void adam_step(const std::vector<Tensor<T>*>& params, const std::vector<Tensor<T>>& grads, AdamState<T>& s,
               double lr) {
  if (params.size() != grads.size() || params.size() != s.m.size()) {
    throw DimensionError("adam: " + std::to_string(params.size()) + " parameters, " + std::to_string(grads.size()) +
                         " gradients, " + std::to_string(s.m.size()) + " moment slots");
  }
  ++s.t;
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
  const T b1 = static_cast<T>(s.beta1), b2 = static_cast<T>(s.beta2);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = *params[i];
    if (p.shape() != grads[i].shape() || p.shape() != s.m[i].shape()) {
      throw DimensionError("adam: shape mismatch at parameter " + std::to_string(i) + ": " + shape_str(p.shape()) +
                           " vs gradient " + shape_str(grads[i].shape()));
    }
    auto theta = p.mutable_data();
    auto m = s.m[i].mutable_data();
    auto v = s.v[i].mutable_data();
    const auto g = grads[i].data();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      m[j] = b1 * m[j] + (T{1} - b1) * g[j];
      v[j] = b2 * v[j] + (T{1} - b2) * g[j] * g[j];
      const double mhat = static_cast<double>(m[j]) / c1;
      const double vhat = static_cast<double>(v[j]) / c2;
      theta[j] = static_cast<T>(static_cast<double>(theta[j]) - lr * mhat / (std::sqrt(vhat) + s.epsilon));
    }
  }
}

namespace {

// Flush-to-zero and denormals-are-zero for the current thread while alive.
// Once a model fits its data the gradients shrink into the float32 subnormal
// range, where every multiply takes a slow microcode path.
class DenormalGuard {
 public:
#if defined(__SSE2__)
  DenormalGuard() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~DenormalGuard() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#endif
};

EncodedBatch gather(const EncodedBatch& all, std::span<const std::size_t> rows) {
  EncodedBatch b;
  b.batch = rows.size();
  b.max_len = all.max_len;
  b.ids.reserve(rows.size() * all.max_len);
  for (auto r : rows) {
    const auto row = all.row(r);
    b.ids.insert(b.ids.end(), row.begin(), row.end());
    b.lengths.push_back(all.lengths[r]);
    b.labels.push_back(all.labels[r]);
  }
  return b;
}

}  // namespace

std::vector<std::span<const std::size_t>> minibatches(std::span<const std::size_t> order, std::size_t size) {
  if (size == 0) throw ConfigError("batch size must be positive");
  std::vector<std::span<const std::size_t>> out;
  for (std::size_t lo = 0; lo < order.size(); lo += size) out.push_back(order.subspan(lo, std::min(size, order.size() - lo)));
  if (out.size() > 1 && out.back().size() == 1) {
    const auto tail = out.back();
    out.pop_back();
    out.back() = order.subspan(out.back().data() - order.data(), out.back().size() + tail.size());
  }
  return out;
}

namespace {

void require_both_classes(const std::array<std::int64_t, 2>& counts) {
  if (counts[0] == 0 || counts[1] == 0) {
    throw DataError("training data must contain both classes (legitimate " + std::to_string(counts[0]) +
                    ", malicious " + std::to_string(counts[1]) + ")");
  }
}

json weights_json(const ClassWeights& w) {
  return {{"counts", w.counts}, {"gamma", w.gamma}, {"raw", w.raw}, {"normalized", w.normalized},
          {"normalize", w.normalize}};
}

}  // namespace

Checkpoint train(const LabeledDataset& data, const TrainConfig& config, const TrainOptions& options) {
  validate(config);
  if (data.texts.size() != data.labels.size()) throw ContractError("train: texts and labels differ in length");
  const auto counts = class_counts(data);
  require_both_classes(counts);
  if (data.size() < 2) throw DataError("train: need at least two samples");

  const auto weights = options.weights_override
                           ? *options.weights_override
                           : compute_class_weights({counts[0], counts[1]}, config.gamma, config.normalize_weights);

  Checkpoint ckpt;
  ckpt.kind = ModelKind::neural;
  ckpt.use_case = data.use_case;
  ckpt.preset = config.preset;
  ckpt.dims = config.dims;
  ckpt.max_len = config.max_len;
  ckpt.vocab = CharVocabulary::fit(data.texts);
  ckpt.hyperparameters = config.to_json();
  ckpt.hyperparameters["class_weights"] = weights_json(weights);

  auto model = build_model<float>(config.preset, ckpt.vocab.size(), config.max_len, config.seed, config.dims);
  const auto all = encode_batch(data.texts, data.labels, ckpt.vocab, config.max_len);

  std::vector<Tensor<float>*> trainable;
  std::vector<std::size_t> trainable_index;
  for (std::size_t i = 0; i < model.params().size(); ++i) {
    if (model.params()[i].trainable) {
      trainable.push_back(&model.params()[i].value);
      trainable_index.push_back(i);
    }
  }
  auto adam = AdamState<float>::fresh(trainable);
  const DenormalGuard ftz;
  // distinct stream from the initialiser, which also starts from `seed`
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ull);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto order = rng.permutation(data.size());
    double loss_sum = 0;
    for (auto rows : minibatches(order, config.batch_size)) {
      const auto batch = gather(all, rows);
      Tape<float> tape;
      auto fwd = model.forward(tape, batch, ops::Mode::train, rng);
      auto loss = weighted_bce_logits(fwd.logits, batch.labels, weights, weights.normalize);
      const auto grads = tape.backward(loss);
      std::vector<Tensor<float>> g;
      g.reserve(trainable_index.size());
      for (auto i : trainable_index) g.push_back(grads[fwd.params[i]]);
      adam_step(trainable, g, adam, config.learning_rate);
      loss_sum += static_cast<double>(loss.value().item()) * static_cast<double>(rows.size());
    }
    EpochRecord record{epoch, loss_sum / static_cast<double>(data.size()), std::nullopt};
    if (!std::isfinite(record.mean_loss)) throw NumericError("training diverged at epoch " + std::to_string(epoch));
    if (options.eval_set && config.eval_every > 0 && epoch % config.eval_every == 0) {
      ckpt.params = model.params();
      record.metrics = evaluate(ckpt, *options.eval_set).metrics;
    }
    ckpt.history.push_back(record);
    if (options.on_epoch) options.on_epoch(record);
  }
  ckpt.params = std::move(model.params());
  return ckpt;
}

Checkpoint train_naive_bayes(const LabeledDataset& data, const NbConfig& config) {
  if (data.texts.size() != data.labels.size()) throw ContractError("train: texts and labels differ in length");
  require_both_classes(class_counts(data));
  std::vector<NgramCounts> docs;
  docs.reserve(data.size());
  for (const auto& t : data.texts) docs.push_back(ngram_counts(t, config.n_lo, config.n_hi));
  Checkpoint ckpt;
  ckpt.kind = ModelKind::naive_bayes;
  ckpt.use_case = data.use_case;
  ckpt.nb = nb_train(docs, data.labels, config.alpha);
  ckpt.nb.n_lo = config.n_lo;
  ckpt.nb.n_hi = config.n_hi;
  ckpt.hyperparameters = {{"alpha", config.alpha}, {"n_lo", config.n_lo}, {"n_hi", config.n_hi}};
  return ckpt;
}

std::vector<Prediction> predict(const Checkpoint& ckpt, std::span<const std::string> texts) {
  std::vector<Prediction> out;
  out.reserve(texts.size());
  if (ckpt.kind == ModelKind::naive_bayes) {
    for (const auto& t : texts) {
      const auto p = nb_predict(ckpt.nb, ngram_counts(t, ckpt.nb.n_lo, ckpt.nb.n_hi));
      out.push_back({p.p_malicious, p.label});
    }
    return out;
  }
  const auto model = ckpt.model();
  constexpr std::size_t chunk = 256;
  for (std::size_t lo = 0; lo < texts.size(); lo += chunk) {
    const auto part = texts.subspan(lo, std::min(chunk, texts.size() - lo));
    const auto batch = encode_batch(part, {}, ckpt.vocab, ckpt.max_len);
    for (float p : model.predict(batch)) out.push_back({static_cast<double>(p), p >= 0.5f ? 1 : 0});
  }
  return out;
}

Evaluation evaluate(const Checkpoint& ckpt, const LabeledDataset& data) {
  if (data.empty()) throw ContractError("evaluate: empty dataset");
  if (data.texts.size() != data.labels.size()) throw ContractError("evaluate: texts and labels differ in length");
  Evaluation ev;
  if (ckpt.use_case && data.use_case && *ckpt.use_case != *data.use_case) {
    ev.warnings.push_back("model was trained for " + std::string(use_case_name(*ckpt.use_case)) +
                          " but the data is labelled " + std::string(use_case_name(*data.use_case)));
  }
  if (ckpt.kind == ModelKind::neural) {
    ev.oov_rate = oov_rate(data.texts, ckpt.vocab);
    if (ev.oov_rate > 0.5) {
      ev.warnings.push_back("warning: " + std::to_string(ev.oov_rate * 100.0) +
                            "% of characters are outside the model vocabulary; check the model matches the data");
    }
  }
  const auto preds = predict(ckpt, data.texts);
  std::vector<int> labels;
  labels.reserve(preds.size());
  for (const auto& p : preds) labels.push_back(p.label);
  ev.confusion = confusion_from_labels(labels, data.labels);
  ev.metrics = metrics_json(ev.confusion);
  return ev;
}

template struct AdamState<float>;
template struct AdamState<double>;
template void adam_step(const std::vector<Tensor<float>*>&, const std::vector<Tensor<float>>&, AdamState<float>&,
                        double);
template void adam_step(const std::vector<Tensor<double>*>&, const std::vector<Tensor<double>>&, AdamState<double>&,
                        double);

}  // namespace costsense
