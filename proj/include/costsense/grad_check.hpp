#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "costsense/autograd.hpp"

namespace costsense {

// A scalar-valued function of some tensors, expressed on a tape so that it
// can be differentiated. The vector holds one leaf per point tensor.
using ScalarFn = std::function<Var<double>(Tape<double>&, const std::vector<Var<double>>&)>;

struct GradCheckReport {
  // max over coordinates of |g_ad - g_fd| / max(1, |g_ad|, |g_fd|)
  double max_rel_error = 0.0;
  std::size_t coordinates = 0;
};

// Compares reverse-mode gradients against central differences
// (f(x+h) - f(x-h)) / 2h, coordinate by coordinate. 64-bit only.
GradCheckReport grad_check(const ScalarFn& f, const std::vector<Tensor<double>>& point, double step = 1e-5);

}  // namespace costsense
