#include "costsense/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "costsense/errors.hpp"

namespace costsense::ops {

namespace {

template <typename T>
void require_rank(const Tensor<T>& t, std::size_t rank, const char* op, const char* operand) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": " + operand + " must have rank " + std::to_string(rank) +
                         ", got " + shape_str(t.shape()));
  }
}

// y[0..n) += a * x[0..n)
template <typename T>
inline void axpy(std::size_t n, T a, const T* __restrict x, T* __restrict y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// [rows x cols] row-major -> [cols x rows]
template <typename T>
std::vector<T> transposed(std::size_t rows, std::size_t cols, const T* x) {
  std::vector<T> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = x[r * cols + c];
  }
  return out;
}

template <typename T>
inline bool all_zero(std::size_t n, const T* x) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] != T{0}) return false;
  }
  return true;
}

template <typename T>
inline T stable_sigmoid(T x) {
  if (x >= T{0}) return T{1} / (T{1} + std::exp(-x));
  const T e = std::exp(x);
  return e / (T{1} + e);
}

}  // namespace

template <typename T>
Var<T> matmul(Var<T> a, Var<T> b) {
  const auto& av = a.value();
  const auto& bv = b.value();
  require_rank(av, 2, "matmul", "lhs");
  require_rank(bv, 2, "matmul", "rhs");
  const std::size_t m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  if (bv.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions disagree: " + shape_str(av.shape()) + " x " +
                         shape_str(bv.shape()));
  }
  Tensor<T> out(Shape{m, n});
  const T* A = av.data().data();
  const T* B = bv.data().data();
  T* C = out.mutable_data().data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const T aip = A[i * k + p];
      if (aip != T{0}) axpy(n, aip, B + p * n, C + i * n);
    }
  }
  return a.tape->record(
      std::move(out), {a, b},
      [m, k, n](BackwardContext<T>& ctx) {
        const T* A = ctx.in[0]->data().data();
        const T* B = ctx.in[1]->data().data();
        const T* dC = ctx.dout.data().data();
        if (ctx.din[0]) {
          T* dA = ctx.din[0]->mutable_data().data();
          const auto BT = transposed(k, n, B);
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t c = 0; c < n; ++c) {
              const T g = dC[i * n + c];
              if (g != T{0}) axpy(k, g, BT.data() + c * k, dA + i * k);
            }
          }
        }
        if (ctx.din[1]) {
          T* dB = ctx.din[1]->mutable_data().data();
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t p = 0; p < k; ++p) {
              const T aip = A[i * k + p];
              if (aip != T{0}) axpy(n, aip, dC + i * n, dB + p * n);
            }
          }
        }
      },
      "matmul");
}

template <typename T>
Var<T> conv1d_valid(Var<T> x, Var<T> kernels, Var<T> bias) {
  const auto& xv = x.value();
  const auto& kv = kernels.value();
  const auto& bv = bias.value();
  require_rank(xv, 3, "conv1d", "input");
  require_rank(kv, 3, "conv1d", "kernels");
  require_rank(bv, 1, "conv1d", "bias");
  const std::size_t batch = xv.dim(0), len = xv.dim(1), in_ch = xv.dim(2);
  const std::size_t k = kv.dim(0), out_ch = kv.dim(2);
  if (kv.dim(1) != in_ch || bv.dim(0) != out_ch) {
    throw DimensionError("conv1d: input " + shape_str(xv.shape()) + ", kernels " + shape_str(kv.shape()) +
                         " and bias " + shape_str(bv.shape()) + " disagree");
  }
  if (len < k) {
    throw DimensionError("conv1d: sequence too short: length " + std::to_string(len) + " < kernel length " +
                         std::to_string(k));
  }
  const std::size_t out_len = len - k + 1;
  // A window over rows t..t+k-1 of one sample is a contiguous k*in_ch slice,
  // so each output row is that slice times the [k*in_ch x out_ch] kernel.
  const std::size_t patch = k * in_ch;
  Tensor<T> out(Shape{batch, out_len, out_ch});
  const T* X = xv.data().data();
  const T* W = kv.data().data();
  const T* Bias = bv.data().data();
  T* Y = out.mutable_data().data();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < out_len; ++t) {
      const T* px = X + (b * len + t) * in_ch;
      T* py = Y + (b * out_len + t) * out_ch;
      std::copy(Bias, Bias + out_ch, py);
      for (std::size_t r = 0; r < patch; ++r) {
        if (px[r] != T{0}) axpy(out_ch, px[r], W + r * out_ch, py);
      }
    }
  }
  return x.tape->record(
      std::move(out), {x, kernels, bias},
      [batch, len, in_ch, out_len, out_ch, patch](BackwardContext<T>& ctx) {
        const T* X = ctx.in[0]->data().data();
        const T* W = ctx.in[1]->data().data();
        const T* dY = ctx.dout.data().data();
        T* dX = ctx.din[0] ? ctx.din[0]->mutable_data().data() : nullptr;
        T* dW = ctx.din[1] ? ctx.din[1]->mutable_data().data() : nullptr;
        T* dBias = ctx.din[2] ? ctx.din[2]->mutable_data().data() : nullptr;
        const auto WT = dX ? transposed(patch, out_ch, W) : std::vector<T>{};
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t t = 0; t < out_len; ++t) {
            const T* g = dY + (b * out_len + t) * out_ch;
            if (all_zero(out_ch, g)) continue;
            const std::size_t base = (b * len + t) * in_ch;
            if (dBias) axpy(out_ch, T{1}, g, dBias);
            if (dW) {
              for (std::size_t r = 0; r < patch; ++r) {
                if (X[base + r] != T{0}) axpy(out_ch, X[base + r], g, dW + r * out_ch);
              }
            }
            if (dX) {
              for (std::size_t c = 0; c < out_ch; ++c) {
                if (g[c] != T{0}) axpy(patch, g[c], WT.data() + c * patch, dX + base);
              }
            }
          }
        }
      },
      "conv1d");
}

template <typename T>
Var<T> maxpool1d(Var<T> x, int pool) {
  if (pool <= 0) throw ConfigError("maxpool1d: pool length must be positive, got " + std::to_string(pool));
  const auto& xv = x.value();
  require_rank(xv, 3, "maxpool1d", "input");
  const std::size_t batch = xv.dim(0), len = xv.dim(1), ch = xv.dim(2);
  const auto p = static_cast<std::size_t>(pool);
  if (len < p) {
    throw DimensionError("maxpool1d: sequence length " + std::to_string(len) + " < pool length " +
                         std::to_string(p));
  }
  const std::size_t out_len = len / p;
  Tensor<T> out(Shape{batch, out_len, ch});
  std::vector<std::size_t> argmax(out.numel());
  const T* X = xv.data().data();
  T* Y = out.mutable_data().data();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < out_len; ++j) {
      for (std::size_t c = 0; c < ch; ++c) {
        std::size_t best = (b * len + j * p) * ch + c;
        for (std::size_t q = 1; q < p; ++q) {
          const std::size_t idx = (b * len + j * p + q) * ch + c;
          if (X[idx] > X[best]) best = idx;
        }
        const std::size_t o = (b * out_len + j) * ch + c;
        Y[o] = X[best];
        argmax[o] = best;
      }
    }
  }
  return x.tape->record(
      std::move(out), {x},
      [argmax = std::move(argmax)](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        T* dX = ctx.din[0]->mutable_data().data();
        const T* dY = ctx.dout.data().data();
        for (std::size_t o = 0; o < argmax.size(); ++o) dX[argmax[o]] += dY[o];
      },
      "maxpool1d");
}

template <typename T>
Var<T> unary(Unary kind, Var<T> x) {
  const auto& xv = x.value();
  Tensor<T> out(xv.shape());
  const T* X = xv.data().data();
  T* Y = out.mutable_data().data();
  const std::size_t n = xv.numel();
  switch (kind) {
    case Unary::relu:
      for (std::size_t i = 0; i < n; ++i) Y[i] = X[i] > T{0} ? X[i] : T{0};
      break;
    case Unary::sigmoid:
      for (std::size_t i = 0; i < n; ++i) Y[i] = stable_sigmoid(X[i]);
      break;
    case Unary::tanh:
      for (std::size_t i = 0; i < n; ++i) Y[i] = std::tanh(X[i]);
      break;
  }
  static constexpr const char* names[] = {"relu", "sigmoid", "tanh"};
  return x.tape->record(
      std::move(out), {x},
      [kind, n](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        const T* X = ctx.in[0]->data().data();
        const T* Y = ctx.out.data().data();
        const T* dY = ctx.dout.data().data();
        T* dX = ctx.din[0]->mutable_data().data();
        switch (kind) {
          case Unary::relu:
            for (std::size_t i = 0; i < n; ++i) {
              if (X[i] > T{0}) dX[i] += dY[i];
            }
            break;
          case Unary::sigmoid:
            for (std::size_t i = 0; i < n; ++i) dX[i] += dY[i] * Y[i] * (T{1} - Y[i]);
            break;
          case Unary::tanh:
            for (std::size_t i = 0; i < n; ++i) dX[i] += dY[i] * (T{1} - Y[i] * Y[i]);
            break;
        }
      },
      names[static_cast<int>(kind)]);
}

template <typename T>
Var<T> binary(Binary kind, Var<T> a, Var<T> b) {
  const auto& av = a.value();
  const auto& bv = b.value();
  const Shape& as = av.shape();
  const Shape& bs = bv.shape();
  const bool suffix =
      bs.size() <= as.size() && std::equal(bs.rbegin(), bs.rend(), as.rbegin());
  if (!suffix && bv.numel() != 1) {
    throw DimensionError(std::string(kind == Binary::add ? "add" : "mul") + ": cannot broadcast " +
                         shape_str(bs) + " onto " + shape_str(as));
  }
  const std::size_t n = av.numel();
  const std::size_t period = bv.numel();
  Tensor<T> out(as);
  const T* A = av.data().data();
  const T* B = bv.data().data();
  T* Y = out.mutable_data().data();
  if (kind == Binary::add) {
    for (std::size_t i = 0; i < n; i += period) {
      for (std::size_t j = 0; j < period; ++j) Y[i + j] = A[i + j] + B[j];
    }
  } else {
    for (std::size_t i = 0; i < n; i += period) {
      for (std::size_t j = 0; j < period; ++j) Y[i + j] = A[i + j] * B[j];
    }
  }
  return a.tape->record(
      std::move(out), {a, b},
      [kind, n, period](BackwardContext<T>& ctx) {
        const T* A = ctx.in[0]->data().data();
        const T* B = ctx.in[1]->data().data();
        const T* dY = ctx.dout.data().data();
        T* dA = ctx.din[0] ? ctx.din[0]->mutable_data().data() : nullptr;
        T* dB = ctx.din[1] ? ctx.din[1]->mutable_data().data() : nullptr;
        for (std::size_t i = 0; i < n; i += period) {
          for (std::size_t j = 0; j < period; ++j) {
            const T g = dY[i + j];
            if (kind == Binary::add) {
              if (dA) dA[i + j] += g;
              if (dB) dB[j] += g;
            } else {
              if (dA) dA[i + j] += g * B[j];
              if (dB) dB[j] += g * A[i + j];
            }
          }
        }
      },
      kind == Binary::add ? "add" : "mul");
}

template <typename T>
Var<T> batchnorm(Var<T> x, Var<T> scale, Var<T> shift, BatchNormState<T>& state, Mode mode) {
  const auto& xv = x.value();
  require_rank(xv, 2, "batchnorm", "input");
  const std::size_t batch = xv.dim(0), features = xv.dim(1);
  const Shape fshape{features};
  if (scale.shape() != fshape || shift.shape() != fshape || state.running_mean.shape() != fshape ||
      state.running_var.shape() != fshape) {
    throw DimensionError("batchnorm: parameters must have shape " + shape_str(fshape));
  }
  if (mode == Mode::train && batch < 2) {
    throw ContractError("batchnorm: batch too small for train mode (" + std::to_string(batch) + " < 2)");
  }
  const T eps = static_cast<T>(state.epsilon);
  const T* X = xv.data().data();
  const T* G = scale.value().data().data();
  const T* Bt = shift.value().data().data();

  std::vector<T> mean(features, T{0}), inv_std(features);
  if (mode == Mode::train) {
    std::vector<T> var(features, T{0});
    for (std::size_t i = 0; i < batch; ++i) {
      for (std::size_t f = 0; f < features; ++f) mean[f] += X[i * features + f];
    }
    for (auto& m : mean) m /= static_cast<T>(batch);
    for (std::size_t i = 0; i < batch; ++i) {
      for (std::size_t f = 0; f < features; ++f) {
        const T d = X[i * features + f] - mean[f];
        var[f] += d * d;
      }
    }
    const T mom = static_cast<T>(state.momentum);
    T* rm = state.running_mean.mutable_data().data();
    T* rv = state.running_var.mutable_data().data();
    for (std::size_t f = 0; f < features; ++f) {
      var[f] /= static_cast<T>(batch);
      inv_std[f] = T{1} / std::sqrt(var[f] + eps);
      rm[f] = mom * rm[f] + (T{1} - mom) * mean[f];
      rv[f] = mom * rv[f] + (T{1} - mom) * var[f];
    }
  } else {
    const T* rm = state.running_mean.data().data();
    const T* rv = state.running_var.data().data();
    for (std::size_t f = 0; f < features; ++f) {
      mean[f] = rm[f];
      inv_std[f] = T{1} / std::sqrt(rv[f] + eps);
    }
  }

  Tensor<T> xhat(xv.shape());
  Tensor<T> out(xv.shape());
  T* H = xhat.mutable_data().data();
  T* Y = out.mutable_data().data();
  for (std::size_t i = 0; i < batch; ++i) {
    for (std::size_t f = 0; f < features; ++f) {
      const std::size_t idx = i * features + f;
      H[idx] = (X[idx] - mean[f]) * inv_std[f];
      Y[idx] = G[f] * H[idx] + Bt[f];
    }
  }
  const bool batch_stats = mode == Mode::train;
  return x.tape->record(
      std::move(out), {x, scale, shift},
      [batch, features, batch_stats, xhat = std::move(xhat), inv_std = std::move(inv_std)](
          BackwardContext<T>& ctx) {
        const T* G = ctx.in[1]->data().data();
        const T* dY = ctx.dout.data().data();
        const T* H = xhat.data().data();
        std::vector<T> sum_dy(features, T{0}), sum_dy_h(features, T{0});
        for (std::size_t i = 0; i < batch; ++i) {
          for (std::size_t f = 0; f < features; ++f) {
            const std::size_t idx = i * features + f;
            sum_dy[f] += dY[idx];
            sum_dy_h[f] += dY[idx] * H[idx];
          }
        }
        if (ctx.din[1]) {
          T* dG = ctx.din[1]->mutable_data().data();
          for (std::size_t f = 0; f < features; ++f) dG[f] += sum_dy_h[f];
        }
        if (ctx.din[2]) {
          T* dB = ctx.din[2]->mutable_data().data();
          for (std::size_t f = 0; f < features; ++f) dB[f] += sum_dy[f];
        }
        if (!ctx.din[0]) return;
        T* dX = ctx.din[0]->mutable_data().data();
        const T n = static_cast<T>(batch);
        for (std::size_t i = 0; i < batch; ++i) {
          for (std::size_t f = 0; f < features; ++f) {
            const std::size_t idx = i * features + f;
            if (batch_stats) {
              dX[idx] += G[f] * inv_std[f] / n * (n * dY[idx] - sum_dy[f] - H[idx] * sum_dy_h[f]);
            } else {
              dX[idx] += G[f] * inv_std[f] * dY[idx];
            }
          }
        }
      },
      "batchnorm");
}

template <typename T>
Tensor<T> dropout_mask(const Shape& shape, double rate, Mode mode, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout: rate must be in [0, 1), got " + std::to_string(rate));
  }
  Tensor<T> mask(shape, T{1});
  if (mode == Mode::infer || rate == 0.0) return mask;
  const T keep = static_cast<T>(1.0 / (1.0 - rate));
  for (auto& m : mask.mutable_data()) m = rng.uniform() < rate ? T{0} : keep;
  return mask;
}

template <typename T>
Var<T> dropout(Var<T> x, double rate, Mode mode, Rng& rng) {
  auto mask = dropout_mask<T>(x.shape(), rate, mode, rng);
  if (mode == Mode::infer || rate == 0.0) return x;
  return mul(x, x.tape->constant(std::move(mask)));
}

template <typename T>
Var<T> embedding(Var<T> table, std::span<const std::int32_t> ids, std::size_t batch, std::size_t len,
                 bool freeze_pad_row) {
  const auto& tv = table.value();
  require_rank(tv, 2, "embedding", "table");
  if (ids.size() != batch * len) {
    throw DimensionError("embedding: expected " + std::to_string(batch * len) + " ids, got " +
                         std::to_string(ids.size()));
  }
  const std::size_t vocab = tv.dim(0), dim = tv.dim(1);
  for (auto id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
      throw EncodingError("embedding: token id " + std::to_string(id) + " outside vocabulary of size " +
                          std::to_string(vocab));
    }
  }
  Tensor<T> out(Shape{batch, len, dim});
  const T* E = tv.data().data();
  T* Y = out.mutable_data().data();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (freeze_pad_row && ids[i] == 0) continue;  // PAD always embeds to zero
    const T* row = E + static_cast<std::size_t>(ids[i]) * dim;
    std::copy(row, row + dim, Y + i * dim);
  }
  std::vector<std::int32_t> id_copy(ids.begin(), ids.end());
  return table.tape->record(
      std::move(out), {table},
      [dim, freeze_pad_row, id_copy = std::move(id_copy)](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        T* dE = ctx.din[0]->mutable_data().data();
        const T* dY = ctx.dout.data().data();
        for (std::size_t i = 0; i < id_copy.size(); ++i) {
          if (freeze_pad_row && id_copy[i] == 0) continue;
          axpy(dim, T{1}, dY + i * dim, dE + static_cast<std::size_t>(id_copy[i]) * dim);
        }
      },
      "embedding");
}

template <typename T>
Var<T> reshape(Var<T> x, Shape shape) {
  auto out = x.value().reshaped(std::move(shape));
  return x.tape->record(
      std::move(out), {x},
      [](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        auto dX = ctx.din[0]->mutable_data();
        auto dY = ctx.dout.data();
        for (std::size_t i = 0; i < dX.size(); ++i) dX[i] += dY[i];
      },
      "reshape");
}

template <typename T>
Var<T> time_step(Var<T> x, std::size_t t) {
  const auto& xv = x.value();
  require_rank(xv, 3, "time_step", "input");
  const std::size_t batch = xv.dim(0), len = xv.dim(1), dim = xv.dim(2);
  if (t >= len) {
    throw DimensionError("time_step: step " + std::to_string(t) + " outside " + shape_str(xv.shape()));
  }
  Tensor<T> out(Shape{batch, dim});
  const T* X = xv.data().data();
  T* Y = out.mutable_data().data();
  for (std::size_t b = 0; b < batch; ++b) std::copy_n(X + (b * len + t) * dim, dim, Y + b * dim);
  return x.tape->record(
      std::move(out), {x},
      [batch, len, dim, t](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        T* dX = ctx.din[0]->mutable_data().data();
        const T* dY = ctx.dout.data().data();
        for (std::size_t b = 0; b < batch; ++b) axpy(dim, T{1}, dY + b * dim, dX + (b * len + t) * dim);
      },
      "time_step");
}

template <typename T>
Var<T> slice_cols(Var<T> x, std::size_t begin, std::size_t end) {
  const auto& xv = x.value();
  require_rank(xv, 2, "slice_cols", "input");
  const std::size_t rows = xv.dim(0), cols = xv.dim(1);
  if (begin >= end || end > cols) {
    throw DimensionError("slice_cols: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") invalid for " + shape_str(xv.shape()));
  }
  const std::size_t width = end - begin;
  Tensor<T> out(Shape{rows, width});
  const T* X = xv.data().data();
  T* Y = out.mutable_data().data();
  for (std::size_t r = 0; r < rows; ++r) std::copy_n(X + r * cols + begin, width, Y + r * width);
  return x.tape->record(
      std::move(out), {x},
      [rows, cols, begin, width](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        T* dX = ctx.din[0]->mutable_data().data();
        const T* dY = ctx.dout.data().data();
        for (std::size_t r = 0; r < rows; ++r) axpy(width, T{1}, dY + r * width, dX + r * cols + begin);
      },
      "slice_cols");
}

template <typename T>
Var<T> mean_axis1(Var<T> x) {
  const auto& xv = x.value();
  require_rank(xv, 3, "mean_axis1", "input");
  const std::size_t batch = xv.dim(0), len = xv.dim(1), dim = xv.dim(2);
  Tensor<T> out(Shape{batch, dim}, T{0});
  const T* X = xv.data().data();
  T* Y = out.mutable_data().data();
  const T inv = T{1} / static_cast<T>(len);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t t = 0; t < len; ++t) axpy(dim, inv, X + (b * len + t) * dim, Y + b * dim);
  }
  return x.tape->record(
      std::move(out), {x},
      [batch, len, dim, inv](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        T* dX = ctx.din[0]->mutable_data().data();
        const T* dY = ctx.dout.data().data();
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t t = 0; t < len; ++t) axpy(dim, inv, dY + b * dim, dX + (b * len + t) * dim);
        }
      },
      "mean_axis1");
}

template <typename T>
Var<T> sum(Var<T> x) {
  T acc{0};
  for (T v : x.value().data()) acc += v;
  return x.tape->record(
      Tensor<T>::scalar(acc), {x},
      [](BackwardContext<T>& ctx) {
        if (!ctx.din[0]) return;
        const T g = ctx.dout[0];
        for (auto& d : ctx.din[0]->mutable_data()) d += g;
      },
      "sum");
}

#define COSTSENSE_INSTANTIATE_OPS(T)                                                                  \
  template Var<T> matmul(Var<T>, Var<T>);                                                             \
  template Var<T> conv1d_valid(Var<T>, Var<T>, Var<T>);                                               \
  template Var<T> maxpool1d(Var<T>, int);                                                             \
  template Var<T> unary(Unary, Var<T>);                                                               \
  template Var<T> binary(Binary, Var<T>, Var<T>);                                                     \
  template Var<T> batchnorm(Var<T>, Var<T>, Var<T>, BatchNormState<T>&, Mode);                        \
  template Tensor<T> dropout_mask(const Shape&, double, Mode, Rng&);                                  \
  template Var<T> dropout(Var<T>, double, Mode, Rng&);                                                \
  template Var<T> embedding(Var<T>, std::span<const std::int32_t>, std::size_t, std::size_t, bool);   \
  template Var<T> reshape(Var<T>, Shape);                                                             \
  template Var<T> time_step(Var<T>, std::size_t);                                                     \
  template Var<T> slice_cols(Var<T>, std::size_t, std::size_t);                                       \
  template Var<T> mean_axis1(Var<T>);                                                                 \
  template Var<T> sum(Var<T>);

COSTSENSE_INSTANTIATE_OPS(float)
COSTSENSE_INSTANTIATE_OPS(double)

#undef COSTSENSE_INSTANTIATE_OPS

}  // namespace costsense::ops
