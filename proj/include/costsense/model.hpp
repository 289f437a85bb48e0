#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "costsense/autograd.hpp"
#include "costsense/ops.hpp"
#include "costsense/rng.hpp"
#include "costsense/tensor.hpp"
#include "costsense/text.hpp"

namespace costsense {

enum class LayerKind { embedding, dense, relu, sigmoid, dropout, batchnorm, conv1d, maxpool1d, lstm, flatten, mean_pool };

enum class Preset { dnn, cnn, lstm, cnn_lstm };

std::string_view layer_kind_name(LayerKind kind);
std::string_view preset_name(Preset preset);
// Throws ConfigError for anything other than dnn, cnn, lstm, cnn_lstm.
Preset parse_preset(std::string_view name);

struct LayerSpec {
  LayerKind kind = LayerKind::relu;
  std::size_t units = 0;    // dense / lstm width, embedding dimension
  std::size_t filters = 0;  // conv1d
  std::size_t kernel = 0;   // conv1d window length
  std::size_t pool = 0;     // maxpool1d
  double rate = 0.0;        // dropout

  static LayerSpec embedding(std::size_t dim) { return {LayerKind::embedding, dim}; }
  static LayerSpec dense(std::size_t units) { return {LayerKind::dense, units}; }
  static LayerSpec lstm(std::size_t units) { return {LayerKind::lstm, units}; }
  static LayerSpec conv1d(std::size_t filters, std::size_t kernel) {
    return {LayerKind::conv1d, 0, filters, kernel};
  }
  static LayerSpec maxpool1d(std::size_t pool) { return {LayerKind::maxpool1d, 0, 0, 0, pool}; }
  static LayerSpec dropout(double rate) { return {LayerKind::dropout, 0, 0, 0, 0, rate}; }
  static LayerSpec of(LayerKind kind) { return {kind}; }
};

struct ModelSpec {
  Preset preset = Preset::cnn;
  std::size_t vocab_size = 0;
  std::size_t max_len = 0;
  std::vector<LayerSpec> layers;
};

// Layer widths used to assemble a preset. The defaults are the published
// architecture; smaller values give a topologically identical copy that is
// cheap enough for finite-difference checks.
struct PresetDims {
  std::size_t embed_dim = 128;
  std::vector<std::size_t> dnn_units{512, 384, 256, 128};
  double dnn_dropout = 0.01;
  std::size_t conv_filters = 64;
  std::size_t conv_kernel = 3;
  std::size_t pool = 2;
  std::size_t cnn_dense = 128;
  double cnn_dropout = 0.3;
  std::size_t lstm_units = 128;
  double lstm_dropout = 0.3;
  std::size_t cnn_lstm_units = 50;

  static PresetDims tiny();
  bool operator==(const PresetDims&) const = default;
};

ModelSpec make_spec(Preset preset, std::size_t vocab_size, std::size_t max_len, const PresetDims& dims = {});

// Per-sample output shape after every layer (batch axis omitted). Throws
// ConfigError on a broken chain: first layer not an embedding, head not
// dense(1)+sigmoid, conv output < 1, pool input shorter than the pool, or a
// layer fed the wrong rank.
std::vector<Shape> validate_spec(const ModelSpec& spec);

template <typename T>
struct NamedTensor {
  std::string name;
  Tensor<T> value;
  bool trainable = true;  // false for batchnorm running statistics
};

template <typename T>
class Parameters {
 public:
  void add(std::string name, Tensor<T> value, bool trainable = true);

  std::size_t size() const noexcept { return entries_.size(); }
  NamedTensor<T>& operator[](std::size_t i) { return entries_[i]; }
  const NamedTensor<T>& operator[](std::size_t i) const { return entries_[i]; }
  const NamedTensor<T>* find(std::string_view name) const;
  NamedTensor<T>* find(std::string_view name);
  // Total trainable scalars whose name starts with `prefix`.
  std::size_t count(std::string_view prefix = {}) const;

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  template <typename U>
  Parameters<U> cast() const {
    Parameters<U> out;
    for (const auto& e : entries_) out.add(e.name, e.value.template cast<U>(), e.trainable);
    return out;
  }

  friend bool operator==(const Parameters& a, const Parameters& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      if (a.entries_[i].name != b.entries_[i].name || !(a.entries_[i].value == b.entries_[i].value)) return false;
    }
    return true;
  }

 private:
  std::vector<NamedTensor<T>> entries_;
};

// Weight names and shapes a spec requires, in creation order.
std::vector<std::pair<std::string, Shape>> parameter_manifest(const ModelSpec& spec);

// Seeded initialisation: Glorot-uniform kernels and embeddings, zero biases,
// PAD embedding row zero, LSTM forget-gate bias 1.
template <typename T>
Parameters<T> init_parameters(const ModelSpec& spec, std::uint64_t seed);

// Standard gated recurrence with zero initial state and gate blocks ordered
// [input | forget | candidate | output] along the 4*hidden axis.
// x [batch x len x dim], kernel [dim x 4h], recurrent [h x 4h], bias [4h]
// -> final hidden state [batch x h].
template <typename T>
Var<T> lstm_forward(Var<T> kernel, Var<T> recurrent, Var<T> bias, Var<T> x);

template <typename T>
class Model {
 public:
  struct Forward {
    Var<T> probs;                  // [batch]
    Var<T> logits;                 // [batch], input to the final sigmoid
    std::vector<Var<T>> params;    // one leaf per Parameters entry
  };

  Model(ModelSpec spec, Parameters<T> params);

  const ModelSpec& spec() const noexcept { return spec_; }
  Parameters<T>& params() noexcept { return params_; }
  const Parameters<T>& params() const noexcept { return params_; }

  // Records the forward pass on `tape`. Train mode draws dropout masks from
  // `rng` and updates batchnorm running statistics.
  Forward forward(Tape<T>& tape, const EncodedBatch& batch, ops::Mode mode, Rng& rng);

  // Inference-mode probabilities; a pure function of (spec, params, batch).
  std::vector<T> predict(const EncodedBatch& batch) const;

  // Forward pass over caller-supplied weight leaves, one per Parameters
  // entry in order. Batchnorm running statistics are read, never written.
  Var<T> apply(std::span<const Var<T>> weights, const EncodedBatch& batch, ops::Mode mode, Rng* rng) const;

 private:
  Var<T> run(std::span<const Var<T>> weights, const EncodedBatch& batch, ops::Mode mode, Rng* rng,
             Parameters<T>* stats, Var<T>* logits = nullptr) const;

  ModelSpec spec_;
  Parameters<T> params_;
};

template <typename T>
Model<T> build_model(Preset preset, std::size_t vocab_size, std::size_t max_len, std::uint64_t seed,
                     const PresetDims& dims = {});

}  // namespace costsense
