#pragma once

#include <cmath>
#include <functional>
#include <memory>

#include <fdeflow/fdeflow.hpp>

namespace fdeflow::test {

using ScalarFn = std::function<double(double)>;

/// Scalar history sampled from fn on [-depth, 0]; the tail keeps following fn.
inline HistoryPtr sampled(const ScalarFn& fn, double depth = 4.0, double step = 1e-3,
                          const ScalarFn& deriv = {}) {
  auto v = [fn](double s) { return scalar_vec(fn(s)); };
  std::function<Vec(double)> d;
  if (deriv) d = [deriv](double s) { return scalar_vec(deriv(s)); };
  return std::make_shared<HistoryFunction>(HistoryFunction::sample(v, depth, step, d, v));
}

inline HistoryPtr constant(double c, int dim = 1) {
  return make_constant_history(Vec::Constant(dim, c));
}

inline SolverConfig config(double grid_step = 1e-3) {
  SolverConfig c;
  c.grid_step = grid_step;
  return c;
}

/// Uniform nodes 0, h, ..., T (T snapped onto the last node).
inline std::vector<double> uniform_nodes(double T, double h) {
  const int n = static_cast<int>(std::lround(T / h));
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = i == n ? T : i * h;
  return t;
}

inline RhsAutonomous scalar_rhs(std::function<double(const History&)> eval,
                                double delay_horizon = 1.0) {
  RhsAutonomous f;
  f.name = "test";
  f.dim = 1;
  f.delay_horizon = delay_horizon;
  f.eval = [eval](const History& phi) { return scalar_vec(eval(phi)); };
  return f;
}

}  // namespace fdeflow::test
