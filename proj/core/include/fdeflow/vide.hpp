#pragma once

// x'(t) = int_0^t k(t,s) h(x(s)) ds as the nonautonomous delay equation
//   x'(t) = g(t, x_t),  g(t, phi) = int_{-t}^0 K(t,s) h((P_o phi)(s)) ds,
// with K(t,s) = k(t, t+s) and P_o the odd prolongation.

#include <functional>
#include <string>

#include "fdeflow/history.hpp"
#include "fdeflow/linalg.hpp"
#include "fdeflow/picard.hpp"
#include "fdeflow/process.hpp"
#include "fdeflow/rhs.hpp"

namespace fdeflow {

struct VideProblem {
  std::string name;
  int dim = 1;
  std::function<Mat(double, double)> kernel;
  /// Partial derivatives of k in its first and second argument. When either
  /// is missing, d/dt K is taken by central differences.
  std::function<Mat(double, double)> kernel_dt;
  std::function<Mat(double, double)> kernel_ds;
  std::function<Vec(const Vec&)> h;
  /// Jacobian of h; central differences when empty.
  std::function<Mat(const Vec&)> dh;
  Vec x0;

  void validate() const;
};

/// K(t,s) = k(t, t+s).
Mat shifted_kernel(const VideProblem& p, double t, double s);

/// h at every node of psi.
ForwardPath substitute_h(const VideProblem& p, const ForwardPath& psi);

/// t -> Dh(psi(t)) chi(t) on the nodes of psi (chi shares the nodes).
ForwardPath substitute_h_deriv(const VideProblem& p, const ForwardPath& psi,
                               const ForwardPath& chi);

/// Signed trapezoid integral over [-t, 0] with max(1, ceil(|t|/quad_step)) panels.
Vec vide_g(const VideProblem& p, double t, const History& phi, double quad_step);

/// D_2 g(t, phi) chi.
Vec vide_g_dphi(const VideProblem& p, double t, const History& phi, const History& chi,
                double quad_step);

/// D_1 g(t, phi) = K(t,-t) h(P_o phi(-t)) + int_{-t}^0 d/dt K(t,s) h(P_o phi(s)) ds.
Vec vide_g_dt(const VideProblem& p, double t, const History& phi, double quad_step);

/// g as a right-hand side; the delay window grows with t.
RhsNonautonomous make_vide_rhs(const VideProblem& p, double quad_step);

/// The process from the constant history x0 on [0, T].
ProcessRun solve_vide(const VideProblem& p, double T, const SolverConfig& cfg);

/// Direct product-trapezoid scheme with one Heun predictor-corrector sweep.
ForwardPath volterra_direct(const VideProblem& p, double T, double step);

}  // namespace fdeflow
