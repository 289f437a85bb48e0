#include "costsense/autograd.hpp"

#include "costsense/errors.hpp"

namespace costsense {

template <typename T>
const Tensor<T>& Var<T>::value() const {
  return tape->value(*this);
}

template <typename T>
bool Var<T>::requires_grad() const {
  return tape->requires_grad(*this);
}

template <typename T>
const Tensor<T>& GradientMap<T>::operator[](Var<T> v) const {
  if (!contains(v)) throw ContractError("no gradient recorded for tape node " + std::to_string(v.id));
  return *grads_[v.id];
}

template <typename T>
Var<T> Tape<T>::leaf(Tensor<T> value, bool requires_grad) {
  if (value.empty()) throw ContractError("tape leaf must be a defined tensor");
  require_finite(value, "leaf");
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad && record_grad_;
  node.is_leaf = true;
  nodes_.push_back(std::move(node));
  return Var<T>{this, nodes_.size() - 1};
}

template <typename T>
Var<T> Tape<T>::record(Tensor<T> value, std::vector<Var<T>> inputs, BackwardFn<T> backward,
                       const char* op_name) {
  require_finite(value, op_name);
  Node node;
  node.value = std::move(value);
  bool any_grad = false;
  node.inputs.reserve(inputs.size());
  for (const auto& in : inputs) {
    if (in.tape != this) throw ContractError(std::string(op_name) + ": operand belongs to another tape");
    node.inputs.push_back(in.id);
    any_grad = any_grad || nodes_[in.id].requires_grad;
  }
  node.requires_grad = any_grad && record_grad_ && static_cast<bool>(backward);
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var<T>{this, nodes_.size() - 1};
}

template <typename T>
GradientMap<T> Tape<T>::backward(Var<T> loss) {
  if (loss.tape != this) throw ContractError("backward: loss belongs to another tape");
  const Tensor<T>& lv = value(loss);
  if (lv.numel() != 1) throw ContractError("backward: loss must be scalar, got shape " + shape_str(lv.shape()));

  std::vector<std::optional<Tensor<T>>> grads(nodes_.size());
  if (nodes_[loss.id].requires_grad) grads[loss.id] = Tensor<T>(lv.shape(), T{1});

  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!grads[i] || !node.backward) continue;
    BackwardContext<T> ctx{node.value, *grads[i], {}, {}};
    ctx.in.reserve(node.inputs.size());
    ctx.din.reserve(node.inputs.size());
    for (std::size_t in : node.inputs) {
      ctx.in.push_back(&nodes_[in].value);
      if (nodes_[in].requires_grad) {
        if (!grads[in]) grads[in] = Tensor<T>(nodes_[in].value.shape(), T{0});
        ctx.din.push_back(&*grads[in]);
      } else {
        ctx.din.push_back(nullptr);
      }
    }
    node.backward(ctx);
    if (!node.is_leaf) grads[i].reset();
  }

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    if (node.is_leaf && node.requires_grad && !grads[i]) grads[i] = Tensor<T>(node.value.shape(), T{0});
  }
  return GradientMap<T>(std::move(grads));
}

template struct Var<float>;
template struct Var<double>;
template class GradientMap<float>;
template class GradientMap<double>;
template class Tape<float>;
template class Tape<double>;

}  // namespace costsense
