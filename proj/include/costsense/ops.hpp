#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "costsense/autograd.hpp"
#include "costsense/rng.hpp"
#include "costsense/tensor.hpp"

// Differentiable operations on tape variables. Every op validates operand
// shapes up front and throws DimensionError naming the offending shapes.
namespace costsense::ops {

enum class Mode { train, infer };

enum class Unary { relu, sigmoid, tanh };
enum class Binary { add, mul };

// [m x k] . [k x n] -> [m x n]
template <typename T>
Var<T> matmul(Var<T> a, Var<T> b);

// Valid (unpadded) cross-correlation.
// x [batch x len x in_ch], kernels [k x in_ch x out_ch], bias [out_ch]
//   -> [batch x (len - k + 1) x out_ch]
template <typename T>
Var<T> conv1d_valid(Var<T> x, Var<T> kernels, Var<T> bias);

// Non-overlapping max over windows of `pool` steps along axis 1 of a
// [batch x len x ch] input. The len % pool tail is dropped. Ties route the
// gradient to the first maximal element.
template <typename T>
Var<T> maxpool1d(Var<T> x, int pool);

template <typename T>
Var<T> unary(Unary kind, Var<T> x);

// `b` broadcasts when its shape is a trailing suffix of `a`'s shape or it
// holds a single element.
template <typename T>
Var<T> binary(Binary kind, Var<T> a, Var<T> b);

template <typename T>
Var<T> relu(Var<T> x) { return unary(Unary::relu, x); }
template <typename T>
Var<T> sigmoid(Var<T> x) { return unary(Unary::sigmoid, x); }
template <typename T>
Var<T> tanh(Var<T> x) { return unary(Unary::tanh, x); }
template <typename T>
Var<T> add(Var<T> a, Var<T> b) { return binary(Binary::add, a, b); }
template <typename T>
Var<T> mul(Var<T> a, Var<T> b) { return binary(Binary::mul, a, b); }

template <typename T>
struct BatchNormState {
  Tensor<T> running_mean;
  Tensor<T> running_var;
  double momentum = 0.99;
  double epsilon = 1e-3;

  static BatchNormState fresh(std::size_t features) {
    return {Tensor<T>(Shape{features}, T{0}), Tensor<T>(Shape{features}, T{1})};
  }
};

// x [batch x features]; scale/shift [features]. Train mode normalises with
// biased batch statistics and folds them into `state` with `momentum`;
// infer mode uses the running statistics.
template <typename T>
Var<T> batchnorm(Var<T> x, Var<T> scale, Var<T> shift, BatchNormState<T>& state, Mode mode);

// Inverted-dropout mask: 0 with probability `rate`, else 1/(1-rate). Infer
// mode returns all ones without consuming randomness.
template <typename T>
Tensor<T> dropout_mask(const Shape& shape, double rate, Mode mode, Rng& rng);

template <typename T>
Var<T> dropout(Var<T> x, double rate, Mode mode, Rng& rng);

// matrix -> [batch x len x dim]. With `freeze_pad_row`, id 0 embeds to zeros
// and row 0 receives no gradient.
template <typename T>
Var<T> embedding(Var<T> table, std::span<const std::int32_t> ids, std::size_t batch, std::size_t len,
                 bool freeze_pad_row);

template <typename T>
Var<T> reshape(Var<T> x, Shape shape);

// [batch x len x dim] -> [batch x dim] at step t.
template <typename T>
Var<T> time_step(Var<T> x, std::size_t t);

// Columns [begin, end) of a matrix.
template <typename T>
Var<T> slice_cols(Var<T> x, std::size_t begin, std::size_t end);

// Mean over axis 1 of [batch x len x dim] -> [batch x dim].
template <typename T>
Var<T> mean_axis1(Var<T> x);

// Sum of all elements -> [1].
template <typename T>
Var<T> sum(Var<T> x);

}  // namespace costsense::ops
