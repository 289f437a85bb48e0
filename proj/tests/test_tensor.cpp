#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "costsense/autograd.hpp"
#include "costsense/errors.hpp"
#include "costsense/grad_check.hpp"
#include "costsense/ops.hpp"
#include "test_util.hpp"

using namespace costsense;

TEST(Tensor, ShapeAndDataAgree) {
  Tensor<float> t(Shape{2, 3}, 1.5f);
  EXPECT_EQ(t.numel(), 6u);
  EXPECT_EQ(t.rank(), 2u);
  EXPECT_THROW(Tensor<float>(Shape{2, 3}, std::vector<float>(5)), DimensionError);
  EXPECT_THROW(Tensor<float>(Shape{2, 0}), DimensionError);
}

TEST(Tensor, ReshapeKeepsValues) {
  auto m = Tensor<double>::matrix({{1, 2}, {3, 4}});
  auto v = m.reshaped(Shape{4});
  EXPECT_EQ(v.values(), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_THROW(m.reshaped(Shape{3}), DimensionError);
}

TEST(Tape, RejectsNonFiniteLeaves) {
  Tape<double> tape;
  Tensor<double> bad(Shape{2}, 0.0);
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(tape.constant(bad), NumericError);
  bad[1] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(tape.constant(bad), NumericError);
}

TEST(Tape, SumGradientIsAllOnes) {
  Tape<double> tape;
  auto x = tape.parameter(test_support::random_tensor(Shape{3, 2, 4}, 1));
  auto g = tape.backward(ops::sum(x));
  const auto& gx = g[x];
  EXPECT_EQ(gx.shape(), (Shape{3, 2, 4}));
  for (double v : gx.data()) EXPECT_EQ(v, 1.0);
}

TEST(Tape, SquareGradient) {
  Tape<double> tape;
  auto x = tape.parameter(Tensor<double>::scalar(3.0));
  auto g = tape.backward(ops::mul(x, x));
  EXPECT_DOUBLE_EQ(g[x].item(), 6.0);
}

TEST(Tape, NonScalarLossIsContractError) {
  Tape<double> tape;
  auto x = tape.parameter(Tensor<double>::vector({1, 2}));
  EXPECT_THROW(tape.backward(ops::relu(x)), ContractError);
}

TEST(Tape, UnusedLeafGetsZeroGradient) {
  Tape<double> tape;
  auto x = tape.parameter(Tensor<double>::vector({1, 2}));
  auto unused = tape.parameter(Tensor<double>(Shape{2, 2}, 5.0));
  auto g = tape.backward(ops::sum(x));
  ASSERT_TRUE(g.contains(unused));
  EXPECT_EQ(g[unused], Tensor<double>(Shape{2, 2}, 0.0));
}

TEST(Tape, ConstantsReceiveNoGradient) {
  Tape<double> tape;
  auto x = tape.parameter(Tensor<double>::vector({1, 2}));
  auto c = tape.constant(Tensor<double>::vector({3, 4}));
  auto g = tape.backward(ops::sum(ops::mul(x, c)));
  EXPECT_FALSE(g.contains(c));
  EXPECT_EQ(g[x].values(), (std::vector<double>{3, 4}));
}

TEST(Tape, GradientsAccumulateAcrossUses) {
  // loss = sum(x + x*x) -> grad 1 + 2x
  Tape<double> tape;
  auto x = tape.parameter(Tensor<double>::vector({1, -2, 0.5}));
  auto g = tape.backward(ops::sum(ops::add(x, ops::mul(x, x))));
  EXPECT_EQ(g[x].values(), (std::vector<double>{3, -3, 2}));
}

TEST(Tape, MixingTapesIsRejected) {
  Tape<double> a, b;
  auto x = a.parameter(Tensor<double>::vector({1}));
  auto y = b.parameter(Tensor<double>::vector({1}));
  EXPECT_THROW(ops::add(x, y), ContractError);
}

TEST(Tape, InferenceTapeRecordsNoGradient) {
  Tape<double> tape(false);
  auto x = tape.parameter(Tensor<double>::vector({1, 2}));
  EXPECT_FALSE(x.requires_grad());
  auto loss = ops::sum(x);
  EXPECT_DOUBLE_EQ(loss.value().item(), 3.0);
}

TEST(GradCheck, QuadraticForm) {
  // f(x) = x^T A x with a fixed A.
  const auto a = test_support::random_tensor(Shape{4, 4}, 11);
  ScalarFn f = [&](Tape<double>& tape, const std::vector<Var<double>>& in) {
    auto x = in[0];
    auto ax = ops::matmul(tape.constant(a), x);  // [4x1]
    return ops::sum(ops::mul(x, ax));
  };
  auto report = grad_check(f, {test_support::random_tensor(Shape{4, 1}, 12)});
  EXPECT_EQ(report.coordinates, 4u);
  EXPECT_LT(report.max_rel_error, 1e-8);
}

TEST(GradCheck, ReluAwayFromKink) {
  ScalarFn f = [](Tape<double>&, const std::vector<Var<double>>& in) {
    return ops::sum(ops::mul(ops::relu(in[0]), in[0]));
  };
  auto report = grad_check(f, {test_support::away_from_zero(Shape{3, 5}, 13)});
  EXPECT_LT(report.max_rel_error, 1e-6);
}

TEST(GradCheck, ConstantFunctionHasZeroError) {
  ScalarFn f = [](Tape<double>& tape, const std::vector<Var<double>>&) {
    return tape.constant(Tensor<double>::scalar(4.2));
  };
  auto report = grad_check(f, {test_support::random_tensor(Shape{2, 2}, 14)});
  EXPECT_EQ(report.max_rel_error, 0.0);
}

TEST(Rng, BelowStaysInRangeAndPermutationIsBijective) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(7), 7u);
  auto perm = rng.permutation(100);
  std::vector<int> seen(100, 0);
  for (auto p : perm) ++seen[p];
  for (int s : seen) EXPECT_EQ(s, 1);
}
