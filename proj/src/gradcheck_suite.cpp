#include "costsense/gradcheck_suite.hpp"

#include <algorithm>

#include "costsense/cost_loss.hpp"
#include "costsense/grad_check.hpp"
#include "costsense/ops.hpp"

namespace costsense {

namespace {

Tensor<double> sample(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor<double> t(std::move(shape));
  for (auto& v : t.mutable_data()) v = rng.uniform(lo, hi);
  return t;
}

// Magnitudes in [0.1, 1] with random sign.
Tensor<double> sample_off_kink(Shape shape, Rng& rng) {
  Tensor<double> t(std::move(shape));
  for (auto& v : t.mutable_data()) {
    const double mag = rng.uniform(0.1, 1.0);
    v = rng.uniform() < 0.5 ? -mag : mag;
  }
  return t;
}

Var<double> project(Var<double> y, std::uint64_t seed) {
  Rng rng(seed);
  return ops::sum(ops::mul(y, y.tape->constant(sample(y.shape(), rng))));
}

GradCheckEntry entry(std::string name, const GradCheckReport& r) { return {std::move(name), r.max_rel_error, r.coordinates}; }

EncodedBatch tiny_batch(std::size_t vocab, std::size_t max_len, Rng& rng) {
  EncodedBatch batch;
  batch.batch = 3;
  batch.max_len = max_len;
  for (std::size_t b = 0; b < batch.batch; ++b) {
    const std::size_t len = max_len - b;  // later rows carry PAD tails
    for (std::size_t t = 0; t < max_len; ++t) {
      batch.ids.push_back(t < len ? static_cast<std::int32_t>(1 + rng.below(vocab - 1)) : CharVocabulary::pad_id);
    }
    batch.lengths.push_back(len);
    batch.labels.push_back(static_cast<int>(b % 2));
  }
  return batch;
}

}  // namespace

GradCheckEntry check_preset_gradients(Preset preset, std::uint64_t seed) {
  constexpr std::size_t vocab = 7;
  const std::size_t max_len = preset == Preset::lstm ? 5 : 9;
  const auto model = build_model<double>(preset, vocab, max_len, seed, PresetDims::tiny());
  Rng rng(seed + 100);
  const auto batch = tiny_batch(vocab, max_len, rng);
  const auto weights = compute_class_weights({2, 1}, 1.0, true);
  const std::vector<int> labels = batch.labels;

  std::vector<Tensor<double>> point;
  std::vector<std::size_t> slot;  // parameter index -> point index, or npos for buffers
  for (const auto& p : model.params()) {
    if (p.trainable) {
      slot.push_back(point.size());
      point.push_back(p.value);
    } else {
      slot.push_back(static_cast<std::size_t>(-1));
    }
  }

  GradCheckEntry worst{"preset:" + std::string(preset_name(preset)), 0.0, 0};
  for (auto mode : {ops::Mode::train, ops::Mode::infer}) {
    ScalarFn f = [&](Tape<double>& tape, const std::vector<Var<double>>& leaves) {
      std::vector<Var<double>> ws;
      for (std::size_t i = 0; i < model.params().size(); ++i) {
        ws.push_back(slot[i] == static_cast<std::size_t>(-1) ? tape.constant(model.params()[i].value)
                                                             : leaves[slot[i]]);
      }
      Rng dropout_rng(seed + 200);  // same masks on every evaluation
      auto probs = model.apply(ws, batch, mode, &dropout_rng);
      return weighted_bce(probs, labels, weights, true);
    };
    const auto r = grad_check(f, point);
    worst.max_rel_error = std::max(worst.max_rel_error, r.max_rel_error);
    worst.coordinates += r.coordinates;
  }
  return worst;
}

std::vector<GradCheckEntry> run_gradcheck_suite(std::optional<Preset> only) {
  std::vector<GradCheckEntry> out;
  Rng rng(2024);

  {
    ScalarFn f = [](Tape<double>&, const std::vector<Var<double>>& in) { return project(ops::matmul(in[0], in[1]), 1); };
    out.push_back(entry("matmul", grad_check(f, {sample({3, 4}, rng), sample({4, 2}, rng)})));
  }
  {
    ScalarFn f = [](Tape<double>&, const std::vector<Var<double>>& in) {
      return project(ops::conv1d_valid(in[0], in[1], in[2]), 2);
    };
    out.push_back(entry("conv1d", grad_check(f, {sample({2, 7, 3}, rng), sample({3, 3, 4}, rng), sample({4}, rng)})));
  }
  {
    ScalarFn f = [](Tape<double>&, const std::vector<Var<double>>& in) { return project(ops::maxpool1d(in[0], 2), 3); };
    out.push_back(entry("maxpool1d", grad_check(f, {sample({2, 9, 3}, rng)})));
  }
  for (auto [kind, name] : {std::pair{ops::Unary::relu, "relu"}, std::pair{ops::Unary::sigmoid, "sigmoid"},
                            std::pair{ops::Unary::tanh, "tanh"}}) {
    ScalarFn f = [kind](Tape<double>&, const std::vector<Var<double>>& in) { return project(ops::unary(kind, in[0]), 4); };
    out.push_back(entry(name, grad_check(f, {sample_off_kink({3, 5}, rng)})));
  }
  for (auto [kind, name] : {std::pair{ops::Binary::add, "add"}, std::pair{ops::Binary::mul, "mul"}}) {
    ScalarFn f = [kind](Tape<double>&, const std::vector<Var<double>>& in) {
      return project(ops::binary(kind, in[0], in[1]), 5);
    };
    out.push_back(entry(name, grad_check(f, {sample({2, 3, 4}, rng), sample({3, 4}, rng)})));
  }
  for (auto [mode, name] : {std::pair{ops::Mode::train, "batchnorm(train)"}, std::pair{ops::Mode::infer, "batchnorm(infer)"}}) {
    ScalarFn f = [mode](Tape<double>&, const std::vector<Var<double>>& in) {
      auto state = ops::BatchNormState<double>::fresh(3);
      state.running_var = Tensor<double>::vector({0.5, 1.5, 2.0});
      return project(ops::batchnorm(in[0], in[1], in[2], state, mode), 6);
    };
    out.push_back(entry(name, grad_check(f, {sample({5, 3}, rng), sample({3}, rng, 0.5, 1.5), sample({3}, rng)})));
  }
  {
    const std::vector<std::int32_t> ids{1, 3, 0, 2, 2, 0};
    ScalarFn f = [ids](Tape<double>&, const std::vector<Var<double>>& in) {
      return project(ops::embedding(in[0], std::span<const std::int32_t>(ids), 2, 3, true), 7);
    };
    out.push_back(entry("embedding", grad_check(f, {sample({4, 3}, rng)})));
  }
  {
    ScalarFn f = [](Tape<double>&, const std::vector<Var<double>>& in) {
      auto a = project(ops::slice_cols(ops::time_step(in[0], 1), 1, 3), 8);
      auto b = project(ops::mean_axis1(in[0]), 9);
      return ops::add(a, b);
    };
    out.push_back(entry("shaping", grad_check(f, {sample({2, 3, 4}, rng)})));
  }
  {
    ScalarFn f = [](Tape<double>&, const std::vector<Var<double>>& in) {
      return project(lstm_forward(in[0], in[1], in[2], in[3]), 10);
    };
    out.push_back(entry("lstm", grad_check(f, {sample({3, 12}, rng), sample({3, 12}, rng), sample({12}, rng),
                                               sample({2, 5, 3}, rng)})));
  }
  {
    const std::vector<int> labels{0, 1, 1, 0};
    const auto weights = compute_class_weights({9, 1}, 1.0, true);
    ScalarFn f = [&](Tape<double>&, const std::vector<Var<double>>& in) {
      return weighted_bce(in[0], labels, weights, true);
    };
    out.push_back(entry("weighted_bce", grad_check(f, {sample({4}, rng, 0.05, 0.95)})));
    ScalarFn g = [&](Tape<double>&, const std::vector<Var<double>>& in) {
      return weighted_bce_logits(in[0], labels, weights, true);
    };
    out.push_back(entry("weighted_bce_logits", grad_check(g, {sample({4}, rng, -4.0, 4.0)})));
  }

  for (auto preset : {Preset::dnn, Preset::cnn, Preset::lstm, Preset::cnn_lstm}) {
    if (only && *only != preset) continue;
    out.push_back(check_preset_gradients(preset));
  }
  return out;
}

}  // namespace costsense
