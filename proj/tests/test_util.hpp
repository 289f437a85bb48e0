#pragma once

#include <cstdint>

#include "costsense/rng.hpp"
#include "costsense/tensor.hpp"

namespace costsense::test_support {

inline Tensor<double> random_tensor(Shape shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  Rng rng(seed);
  Tensor<double> t(std::move(shape));
  for (auto& v : t.mutable_data()) v = rng.uniform(lo, hi);
  return t;
}

// Values in +-[lo, hi]: keeps every coordinate at least `lo` away from a relu
// kink, so central differences with small steps never straddle it.
inline Tensor<double> away_from_zero(Shape shape, std::uint64_t seed, double lo = 0.1, double hi = 1.0) {
  Rng rng(seed);
  Tensor<double> t(std::move(shape));
  for (auto& v : t.mutable_data()) {
    const double mag = rng.uniform(lo, hi);
    v = rng.uniform() < 0.5 ? -mag : mag;
  }
  return t;
}

}  // namespace costsense::test_support
