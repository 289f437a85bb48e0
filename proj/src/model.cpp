#include "costsense/model.hpp"

#include <cmath>

#include "costsense/errors.hpp"

namespace costsense {

std::string_view layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::embedding: return "embedding";
    case LayerKind::dense: return "dense";
    case LayerKind::relu: return "relu";
    case LayerKind::sigmoid: return "sigmoid";
    case LayerKind::dropout: return "dropout";
    case LayerKind::batchnorm: return "batchnorm";
    case LayerKind::conv1d: return "conv1d";
    case LayerKind::maxpool1d: return "maxpool1d";
    case LayerKind::lstm: return "lstm";
    case LayerKind::flatten: return "flatten";
    case LayerKind::mean_pool: return "mean_pool";
  }
  return "?";
}

std::string_view preset_name(Preset preset) {
  switch (preset) {
    case Preset::dnn: return "dnn";
    case Preset::cnn: return "cnn";
    case Preset::lstm: return "lstm";
    case Preset::cnn_lstm: return "cnn_lstm";
  }
  return "?";
}

Preset parse_preset(std::string_view name) {
  for (auto p : {Preset::dnn, Preset::cnn, Preset::lstm, Preset::cnn_lstm}) {
    if (preset_name(p) == name) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected dnn, cnn, lstm or cnn_lstm)");
}

PresetDims PresetDims::tiny() {
  PresetDims d;
  d.embed_dim = 8;
  d.dnn_units = {8, 7, 6, 5};
  d.conv_filters = 4;
  d.cnn_dense = 5;
  d.lstm_units = 6;
  d.cnn_lstm_units = 6;
  return d;
}

ModelSpec make_spec(Preset preset, std::size_t vocab_size, std::size_t max_len, const PresetDims& dims) {
  if (vocab_size < 2) throw ConfigError("vocab_size must be at least 2");
  if (max_len < 3) throw ConfigError("max_len must be at least 3");
  ModelSpec spec{preset, vocab_size, max_len, {}};
  auto& L = spec.layers;
  L.push_back(LayerSpec::embedding(dims.embed_dim));
  switch (preset) {
    case Preset::dnn:
      if (dims.dnn_units.size() != 4) throw ConfigError("dnn preset needs four hidden widths");
      L.push_back(LayerSpec::of(LayerKind::flatten));
      for (std::size_t i = 0; i < 3; ++i) {
        L.push_back(LayerSpec::dense(dims.dnn_units[i]));
        L.push_back(LayerSpec::of(LayerKind::relu));
        L.push_back(LayerSpec::dropout(dims.dnn_dropout));
        L.push_back(LayerSpec::of(LayerKind::batchnorm));
      }
      L.push_back(LayerSpec::dense(dims.dnn_units[3]));
      L.push_back(LayerSpec::of(LayerKind::relu));
      break;
    case Preset::cnn:
      L.push_back(LayerSpec::conv1d(dims.conv_filters, dims.conv_kernel));
      L.push_back(LayerSpec::of(LayerKind::relu));
      L.push_back(LayerSpec::maxpool1d(dims.pool));
      L.push_back(LayerSpec::of(LayerKind::flatten));
      L.push_back(LayerSpec::dense(dims.cnn_dense));
      L.push_back(LayerSpec::of(LayerKind::relu));
      L.push_back(LayerSpec::dropout(dims.cnn_dropout));
      break;
    case Preset::lstm:
      L.push_back(LayerSpec::lstm(dims.lstm_units));
      L.push_back(LayerSpec::dropout(dims.lstm_dropout));
      break;
    case Preset::cnn_lstm:
      L.push_back(LayerSpec::conv1d(dims.conv_filters, dims.conv_kernel));
      L.push_back(LayerSpec::of(LayerKind::relu));
      L.push_back(LayerSpec::maxpool1d(dims.pool));
      L.push_back(LayerSpec::lstm(dims.cnn_lstm_units));
      break;
  }
  L.push_back(LayerSpec::dense(1));
  L.push_back(LayerSpec::of(LayerKind::sigmoid));
  validate_spec(spec);
  return spec;
}

std::vector<Shape> validate_spec(const ModelSpec& spec) {
  const auto& L = spec.layers;
  if (L.size() < 3 || L.front().kind != LayerKind::embedding) {
    throw ConfigError("model must start with an embedding layer");
  }
  if (L[L.size() - 2].kind != LayerKind::dense || L[L.size() - 2].units != 1 || L.back().kind != LayerKind::sigmoid) {
    throw ConfigError("model must end with dense(1) followed by sigmoid");
  }
  if (spec.vocab_size < 2) throw ConfigError("vocab_size must be at least 2");

  std::vector<Shape> shapes;
  Shape cur{spec.max_len};
  auto fail = [&](std::size_t i, const std::string& why) {
    throw ConfigError("layer " + std::to_string(i) + " (" + std::string(layer_kind_name(L[i].kind)) + "): " + why +
                      ", input shape " + shape_str(cur));
  };
  for (std::size_t i = 0; i < L.size(); ++i) {
    const auto& layer = L[i];
    switch (layer.kind) {
      case LayerKind::embedding:
        if (i != 0) fail(i, "embedding must be the first layer");
        if (layer.units == 0) fail(i, "dimension must be positive");
        cur = {spec.max_len, layer.units};
        break;
      case LayerKind::dense:
        if (cur.size() != 1) fail(i, "expects a flat feature vector");
        if (layer.units == 0) fail(i, "units must be positive");
        cur = {layer.units};
        break;
      case LayerKind::relu:
      case LayerKind::sigmoid:
        break;
      case LayerKind::dropout:
        if (!(layer.rate >= 0.0 && layer.rate < 1.0)) fail(i, "rate must be in [0, 1)");
        break;
      case LayerKind::batchnorm:
        if (cur.size() != 1) fail(i, "expects a flat feature vector");
        break;
      case LayerKind::conv1d:
        if (cur.size() != 2) fail(i, "expects a sequence");
        if (layer.filters == 0 || layer.kernel == 0) fail(i, "filters and kernel must be positive");
        if (cur[0] < layer.kernel) fail(i, "sequence shorter than kernel (conv output < 1)");
        cur = {cur[0] - layer.kernel + 1, layer.filters};
        break;
      case LayerKind::maxpool1d:
        if (cur.size() != 2) fail(i, "expects a sequence");
        if (layer.pool == 0) fail(i, "pool length must be positive");
        if (cur[0] < layer.pool) fail(i, "sequence shorter than pool length");
        cur = {cur[0] / layer.pool, cur[1]};
        break;
      case LayerKind::lstm:
        if (cur.size() != 2) fail(i, "expects a sequence");
        if (layer.units == 0) fail(i, "units must be positive");
        cur = {layer.units};
        break;
      case LayerKind::flatten:
        cur = {shape_numel(cur)};
        break;
      case LayerKind::mean_pool:
        if (cur.size() != 2) fail(i, "expects a sequence");
        cur = {cur[1]};
        break;
    }
    shapes.push_back(cur);
  }
  return shapes;
}

namespace {

std::string layer_prefix(const ModelSpec& spec, std::size_t i) {
  return std::string(layer_kind_name(spec.layers[i].kind)) + "_" + std::to_string(i) + "/";
}

}  // namespace

std::vector<std::pair<std::string, Shape>> parameter_manifest(const ModelSpec& spec) {
  const auto shapes = validate_spec(spec);
  std::vector<std::pair<std::string, Shape>> out;
  Shape in{spec.max_len};
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& layer = spec.layers[i];
    const auto p = layer_prefix(spec, i);
    switch (layer.kind) {
      case LayerKind::embedding:
        out.emplace_back(p + "embeddings", Shape{spec.vocab_size, layer.units});
        break;
      case LayerKind::dense:
        out.emplace_back(p + "kernel", Shape{in[0], layer.units});
        out.emplace_back(p + "bias", Shape{layer.units});
        break;
      case LayerKind::conv1d:
        out.emplace_back(p + "kernel", Shape{layer.kernel, in[1], layer.filters});
        out.emplace_back(p + "bias", Shape{layer.filters});
        break;
      case LayerKind::lstm:
        out.emplace_back(p + "kernel", Shape{in[1], 4 * layer.units});
        out.emplace_back(p + "recurrent_kernel", Shape{layer.units, 4 * layer.units});
        out.emplace_back(p + "bias", Shape{4 * layer.units});
        break;
      case LayerKind::batchnorm:
        out.emplace_back(p + "gamma", Shape{in[0]});
        out.emplace_back(p + "beta", Shape{in[0]});
        out.emplace_back(p + "moving_mean", Shape{in[0]});
        out.emplace_back(p + "moving_variance", Shape{in[0]});
        break;
      default:
        break;
    }
    in = shapes[i];
  }
  return out;
}

template <typename T>
void Parameters<T>::add(std::string name, Tensor<T> value, bool trainable) {
  if (find(name)) throw ContractError("duplicate parameter name '" + name + "'");
  entries_.push_back({std::move(name), std::move(value), trainable});
}

template <typename T>
const NamedTensor<T>* Parameters<T>::find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

template <typename T>
NamedTensor<T>* Parameters<T>::find(std::string_view name) {
  for (auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

template <typename T>
std::size_t Parameters<T>::count(std::string_view prefix) const {
  std::size_t n = 0;
  for (const auto& e : entries_) {
    if (e.trainable && std::string_view(e.name).starts_with(prefix)) n += e.value.numel();
  }
  return n;
}

namespace {

bool ends_with(const std::string& s, std::string_view suffix) { return std::string_view(s).ends_with(suffix); }

Tensor<double> glorot(const Shape& shape, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor<double> t(shape);
  for (auto& v : t.mutable_data()) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

template <typename T>
Parameters<T> init_parameters(const ModelSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  Parameters<T> params;
  for (const auto& [name, shape] : parameter_manifest(spec)) {
    Tensor<double> value;
    bool trainable = true;
    if (ends_with(name, "/embeddings")) {
      value = glorot(shape, shape[0], shape[1], rng);
      for (std::size_t j = 0; j < shape[1]; ++j) value[j] = 0.0;  // PAD row
    } else if (ends_with(name, "/kernel") && shape.size() == 3) {
      value = glorot(shape, shape[0] * shape[1], shape[0] * shape[2], rng);
    } else if (ends_with(name, "/kernel") || ends_with(name, "/recurrent_kernel")) {
      value = glorot(shape, shape[0], shape[1], rng);
    } else if (ends_with(name, "/bias")) {
      value = Tensor<double>(shape, 0.0);
      if (name.starts_with("lstm_")) {
        const std::size_t h = shape[0] / 4;
        for (std::size_t j = h; j < 2 * h; ++j) value[j] = 1.0;
      }
    } else if (ends_with(name, "/gamma") || ends_with(name, "/moving_variance")) {
      value = Tensor<double>(shape, 1.0);
      trainable = !ends_with(name, "/moving_variance");
    } else {
      // beta, moving_mean
      value = Tensor<double>(shape, 0.0);
      trainable = !ends_with(name, "/moving_mean");
    }
    params.add(name, value.cast<T>(), trainable);
  }
  return params;
}

template <typename T>
Var<T> lstm_forward(Var<T> kernel, Var<T> recurrent, Var<T> bias, Var<T> x) {
  const auto& xs = x.shape();
  if (xs.size() != 3) throw DimensionError("lstm: input must be [batch x len x dim], got " + shape_str(xs));
  const std::size_t batch = xs[0], len = xs[1], dim = xs[2];
  const std::size_t hidden = recurrent.shape()[0];
  if (kernel.shape() != Shape{dim, 4 * hidden} || recurrent.shape() != Shape{hidden, 4 * hidden} ||
      bias.shape() != Shape{4 * hidden}) {
    throw DimensionError("lstm: weights " + shape_str(kernel.shape()) + ", " + shape_str(recurrent.shape()) + ", " +
                         shape_str(bias.shape()) + " do not fit input " + shape_str(xs));
  }
  Tape<T>& tape = *x.tape;
  // Input projections for every step in one product.
  auto projected = ops::reshape(ops::matmul(ops::reshape(x, Shape{batch * len, dim}), kernel),
                                Shape{batch, len, 4 * hidden});
  auto h = tape.constant(Tensor<T>(Shape{batch, hidden}, T{0}));
  auto c = h;
  for (std::size_t t = 0; t < len; ++t) {
    auto z = ops::add(ops::add(ops::time_step(projected, t), ops::matmul(h, recurrent)), bias);
    auto in_gate = ops::sigmoid(ops::slice_cols(z, 0, hidden));
    auto forget_gate = ops::sigmoid(ops::slice_cols(z, hidden, 2 * hidden));
    auto candidate = ops::tanh(ops::slice_cols(z, 2 * hidden, 3 * hidden));
    auto out_gate = ops::sigmoid(ops::slice_cols(z, 3 * hidden, 4 * hidden));
    c = ops::add(ops::mul(forget_gate, c), ops::mul(in_gate, candidate));
    h = ops::mul(out_gate, ops::tanh(c));
  }
  return h;
}

template <typename T>
Model<T>::Model(ModelSpec spec, Parameters<T> params) : spec_(std::move(spec)), params_(std::move(params)) {
  const auto manifest = parameter_manifest(spec_);
  if (manifest.size() != params_.size()) {
    throw ShapeMismatchError("model expects " + std::to_string(manifest.size()) + " weight tensors, got " +
                             std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    if (manifest[i].first != params_[i].name || manifest[i].second != params_[i].value.shape()) {
      throw ShapeMismatchError("weight " + std::to_string(i) + ": expected " + manifest[i].first + " " +
                               shape_str(manifest[i].second) + ", got " + params_[i].name + " " +
                               shape_str(params_[i].value.shape()));
    }
  }
}

template <typename T>
typename Model<T>::Forward Model<T>::forward(Tape<T>& tape, const EncodedBatch& batch, ops::Mode mode, Rng& rng) {
  Forward out;
  out.params.reserve(params_.size());
  for (const auto& p : params_) {
    out.params.push_back(p.trainable ? tape.parameter(p.value) : tape.constant(p.value));
  }
  out.probs = run(out.params, batch, mode, &rng, mode == ops::Mode::train ? &params_ : nullptr, &out.logits);
  return out;
}

template <typename T>
std::vector<T> Model<T>::predict(const EncodedBatch& batch) const {
  Tape<T> tape(false);
  std::vector<Var<T>> weights;
  weights.reserve(params_.size());
  for (const auto& p : params_) weights.push_back(tape.constant(p.value));
  const auto& v = run(weights, batch, ops::Mode::infer, nullptr, nullptr).value();
  return {v.data().begin(), v.data().end()};
}

template <typename T>
Var<T> Model<T>::apply(std::span<const Var<T>> weights, const EncodedBatch& batch, ops::Mode mode, Rng* rng) const {
  return run(weights, batch, mode, rng, nullptr);
}

template <typename T>
Var<T> Model<T>::run(std::span<const Var<T>> weights, const EncodedBatch& batch, ops::Mode mode, Rng* rng,
                     Parameters<T>* stats, Var<T>* logits) const {
  if (weights.size() != params_.size()) {
    throw ContractError("forward: expected " + std::to_string(params_.size()) + " weight leaves, got " +
                        std::to_string(weights.size()));
  }
  if (batch.max_len != spec_.max_len) {
    throw DimensionError("batch encoded with max_len " + std::to_string(batch.max_len) + ", model expects " +
                         std::to_string(spec_.max_len));
  }
  if (batch.batch == 0) throw ContractError("forward: empty batch");
  if (mode == ops::Mode::train && !rng) throw ContractError("forward: train mode needs a generator");

  std::size_t next = 0;
  auto take = [&]() { return weights[next++]; };

  Var<T> x{};
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const auto& layer = spec_.layers[i];
    switch (layer.kind) {
      case LayerKind::embedding:
        x = ops::embedding(take(), std::span<const std::int32_t>(batch.ids), batch.batch, batch.max_len, true);
        break;
      case LayerKind::dense: {
        auto kernel = take();
        auto bias = take();
        x = ops::add(ops::matmul(x, kernel), bias);
        break;
      }
      case LayerKind::relu:
        x = ops::relu(x);
        break;
      case LayerKind::sigmoid:
        if (logits && i + 1 == spec_.layers.size()) *logits = ops::reshape(x, Shape{batch.batch});
        x = ops::sigmoid(x);
        break;
      case LayerKind::dropout:
        x = ops::dropout(x, layer.rate, mode, *rng);
        break;
      case LayerKind::batchnorm: {
        const std::size_t first = next;
        auto gamma = take();
        auto beta = take();
        next += 2;
        ops::BatchNormState<T> state{weights[first + 2].value(), weights[first + 3].value()};
        x = ops::batchnorm(x, gamma, beta, state, mode);
        if (stats) {
          (*stats)[first + 2].value = std::move(state.running_mean);
          (*stats)[first + 3].value = std::move(state.running_var);
        }
        break;
      }
      case LayerKind::conv1d: {
        auto kernel = take();
        auto bias = take();
        x = ops::conv1d_valid(x, kernel, bias);
        break;
      }
      case LayerKind::maxpool1d:
        x = ops::maxpool1d(x, static_cast<int>(layer.pool));
        break;
      case LayerKind::lstm: {
        auto kernel = take();
        auto recurrent = take();
        auto bias = take();
        x = lstm_forward(kernel, recurrent, bias, x);
        break;
      }
      case LayerKind::flatten:
        x = ops::reshape(x, Shape{batch.batch, shape_numel(x.shape()) / batch.batch});
        break;
      case LayerKind::mean_pool:
        x = ops::mean_axis1(x);
        break;
    }
  }
  return ops::reshape(x, Shape{batch.batch});
}

template <typename T>
Model<T> build_model(Preset preset, std::size_t vocab_size, std::size_t max_len, std::uint64_t seed,
                     const PresetDims& dims) {
  auto spec = make_spec(preset, vocab_size, max_len, dims);
  auto params = init_parameters<T>(spec, seed);
  return Model<T>(std::move(spec), std::move(params));
}

template class Parameters<float>;
template class Parameters<double>;
template class Model<float>;
template class Model<double>;
template Parameters<float> init_parameters(const ModelSpec&, std::uint64_t);
template Parameters<double> init_parameters(const ModelSpec&, std::uint64_t);
template Var<float> lstm_forward(Var<float>, Var<float>, Var<float>, Var<float>);
template Var<double> lstm_forward(Var<double>, Var<double>, Var<double>, Var<double>);
template Model<float> build_model(Preset, std::size_t, std::size_t, std::uint64_t, const PresetDims&);
template Model<double> build_model(Preset, std::size_t, std::size_t, std::uint64_t, const PresetDims&);

}  // namespace costsense
