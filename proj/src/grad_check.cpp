#include "costsense/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "costsense/errors.hpp"

namespace costsense {

namespace {

double evaluate(const ScalarFn& f, const std::vector<Tensor<double>>& point) {
  Tape<double> tape(false);
  std::vector<Var<double>> leaves;
  leaves.reserve(point.size());
  for (const auto& t : point) leaves.push_back(tape.constant(t));
  return f(tape, leaves).value().item();
}

}  // namespace

GradCheckReport grad_check(const ScalarFn& f, const std::vector<Tensor<double>>& point, double step) {
  Tape<double> tape;
  std::vector<Var<double>> leaves;
  leaves.reserve(point.size());
  for (const auto& t : point) leaves.push_back(tape.parameter(t));
  const auto grads = tape.backward(f(tape, leaves));

  GradCheckReport report;
  auto probe = point;
  for (std::size_t p = 0; p < probe.size(); ++p) {
    const auto& analytic = grads[leaves[p]];
    auto values = probe[p].mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + step;
      const double up = evaluate(f, probe);
      values[i] = saved - step;
      const double down = evaluate(f, probe);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double ad = analytic[i];
      const double err = std::abs(ad - numeric) / std::max({1.0, std::abs(ad), std::abs(numeric)});
      report.max_rel_error = std::max(report.max_rel_error, err);
      ++report.coordinates;
    }
  }
  return report;
}

}  // namespace costsense
