#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "costsense/tensor.hpp"

namespace costsense {

template <typename T>
class Tape;

// Handle to a value recorded on a tape. Cheap to copy; valid for the tape's
// lifetime.
template <typename T>
struct Var {
  Tape<T>* tape = nullptr;
  std::size_t id = 0;

  const Tensor<T>& value() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;
};

// What a backward rule sees. `din[i]` is null when input i needs no gradient;
// otherwise it is a zero-initialised (or partially accumulated) buffer that
// the rule must add into.
template <typename T>
struct BackwardContext {
  const Tensor<T>& out;
  const Tensor<T>& dout;
  std::vector<const Tensor<T>*> in;
  std::vector<Tensor<T>*> din;
};

template <typename T>
using BackwardFn = std::function<void(BackwardContext<T>&)>;

template <typename T>
class GradientMap {
 public:
  GradientMap() = default;
  explicit GradientMap(std::vector<std::optional<Tensor<T>>> grads) : grads_(std::move(grads)) {}

  bool contains(Var<T> v) const { return v.id < grads_.size() && grads_[v.id].has_value(); }
  // Throws ContractError when `v` received no gradient.
  const Tensor<T>& operator[](Var<T> v) const;

 private:
  std::vector<std::optional<Tensor<T>>> grads_;
};

// Linear record of a forward computation. Node i only depends on nodes j < i,
// so reverse iteration is a valid topological order for backward.
//
// A tape built with record_grad = false keeps forward values only; ops skip
// storing backward rules, which is the inference path.
template <typename T>
class Tape {
 public:
  explicit Tape(bool record_grad = true) : record_grad_(record_grad) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var<T> leaf(Tensor<T> value, bool requires_grad = false);
  Var<T> constant(Tensor<T> value) { return leaf(std::move(value), false); }
  Var<T> parameter(Tensor<T> value) { return leaf(std::move(value), true); }

  // Records an op output. `backward` may be empty for non-differentiable
  // outputs. Output values are checked for NaN/Inf here.
  Var<T> record(Tensor<T> value, std::vector<Var<T>> inputs, BackwardFn<T> backward, const char* op_name);

  const Tensor<T>& value(Var<T> v) const { return nodes_.at(v.id).value; }
  bool requires_grad(Var<T> v) const { return nodes_.at(v.id).requires_grad; }
  bool recording() const noexcept { return record_grad_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  // Reverse-mode accumulation from a single-element loss. Every leaf created
  // with requires_grad gets a gradient of its own shape (zeros if the loss
  // does not depend on it).
  GradientMap<T> backward(Var<T> loss);

 private:
  struct Node {
    Tensor<T> value;
    std::vector<std::size_t> inputs;
    BackwardFn<T> backward;
    bool requires_grad = false;
    bool is_leaf = false;
  };

  bool record_grad_;
  std::deque<Node> nodes_;
};

template <typename T>
GradientMap<T> backward(Var<T> loss) {
  return loss.tape->backward(loss);
}

extern template struct Var<float>;
extern template struct Var<double>;
extern template class GradientMap<float>;
extern template class GradientMap<double>;
extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace costsense
