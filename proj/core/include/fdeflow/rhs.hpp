#pragma once

#include <functional>
#include <string>

#include "fdeflow/history.hpp"
#include "fdeflow/linalg.hpp"

namespace fdeflow {

/// Right-hand side of x'(t) = f(x_t).
struct RhsAutonomous {
  std::string name;
  int dim = 1;
  std::function<Vec(const History&)> eval;
  /// Df(phi) chi. Empty: central differences.
  std::function<Vec(const History&, const History&)> dir_deriv;
  /// f(phi) only reads phi on [-delay_horizon, 0].
  double delay_horizon = 1.0;
  /// When set, the window read at time t is delay_horizon + t.
  bool growing_delay = false;
  /// Membership in the domain U. Empty: U = C.
  std::function<bool(const History&)> in_domain;
};

/// Right-hand side of x'(t) = g(t, x_t).
struct RhsNonautonomous {
  std::string name;
  int dim = 1;
  std::function<Vec(double, const History&)> eval;
  /// D_2 g(t, phi) chi. Empty: central differences.
  std::function<Vec(double, const History&, const History&)> dphi_deriv;
  /// D_1 g(t, phi). Empty: central differences.
  std::function<Vec(double, const History&)> dt_partial;
  double delay_horizon = 1.0;
  bool growing_delay = false;
  std::function<bool(double, const History&)> in_domain;
};

/// f(phi); DomainError outside U or for a non-finite value.
Vec eval_f(const RhsAutonomous& f, const History& phi);

/// Df(phi) chi, exact when available.
Vec eval_df(const RhsAutonomous& f, const History& phi, const History& chi);

Vec eval_g(const RhsNonautonomous& g, double t, const History& phi);

bool in_domain(const RhsAutonomous& f, const History& phi);

}  // namespace fdeflow
