#pragma once

// One solution step of x'(t) = f(x_t), x_0 = phi, written as the fixed-point
// problem  eta = B_S(eta, phi) = I_S F_S J_S(eta, phi)  on paths vanishing at 0.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "fdeflow/history.hpp"
#include "fdeflow/numerics.hpp"
#include "fdeflow/rhs.hpp"

namespace fdeflow {

struct SolverConfig {
  double grid_step = 1e-3;
  QuadratureKind quadrature = QuadratureKind::Trapezoid;
  Tolerance tol{};

  double s_min = 0x1p-20;
  int max_halvings = 20;
  double max_initial_step = 1.0;

  /// Multiplies the probed derivative norm.
  double safety = 2.0;
  /// Ball radius eps = ball_scale * (1 + |phi(0)|_inf).
  double ball_scale = 0.5;
  int probe_points = 4;
  int probe_directions = 4;
  std::uint64_t seed = 0x5eedf00dULL;

  void validate() const;
};

struct StepSpec {
  double length = 0.0;
  int panels = 1;
  /// length == panels * grid_step, so node i sits at i * grid_step.
  bool on_grid = false;
};

std::vector<double> local_nodes(const StepSpec& spec, double grid_step);

struct StepPlan {
  StepSpec step;
  double lipschitz_est = 0.0;   // L-hat, including the safety factor
  double df_norm_at_phi = 0.0;  // probed |Df(phi)| alone, no safety factor
  double eps = 0.0;
  double contraction_bound = 0.0;  // L-hat * S
  double smallness = 0.0;          // |B_S(0, phi)|_sup
  int halvings = 0;

  double S() const { return step.length; }
};

struct PicardReport {
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> ratios;
};

struct PlanContext {
  double remaining = std::numeric_limits<double>::infinity();
  double elapsed = 0.0;
};

/// Local solution on (-inf, S] together with its iteration diagnostics.
struct LocalSolution {
  Trajectory x;
  PicardReport report;
};

/// F_T: t -> f(xi_t) at every forward node of xi.
ForwardPath substitute(const RhsAutonomous& f, const Trajectory& xi);

/// I_T: cumulative integral on the nodes of psi; derivative samples are psi.
ForwardPath integrate_path(const ForwardPath& psi,
                           QuadratureKind kind = QuadratureKind::Trapezoid);

/// B_T(eta, phi).
ForwardPath picard_map(const RhsAutonomous& f, const ForwardPath& eta, HistoryPtr phi,
                       QuadratureKind kind = QuadratureKind::Trapezoid);

StepPlan plan_step(const RhsAutonomous& f, const History& phi, const SolverConfig& cfg,
                   const PlanContext& ctx = {});

LocalSolution solve_local(const RhsAutonomous& f, HistoryPtr phi, const StepSpec& step,
                          const SolverConfig& cfg);

/// Largest |B(eta2) - B(eta1)|_sup / |eta2 - eta1|_sup over `pairs` random
/// smooth pairs in the eps/2 ball on the nodes of `step`.
double measure_contraction(const RhsAutonomous& f, HistoryPtr phi, const StepSpec& step,
                           double eps, const SolverConfig& cfg, int pairs,
                           std::uint64_t seed);

namespace detail {

/// Integrand evaluated at forward node i (local time u) on the segment x_u.
using Integrand = std::function<Vec(std::size_t i, double u, const History& segment)>;

struct FixedPoint {
  std::vector<double> eta;  // flat, dim per node, eta[0] = 0
  std::vector<double> psi;  // integrand at the final iterate
  PicardReport report;
};

/// Runs eta <- I(integrand(J(eta, phi))) from eta = 0 on the given nodes.
FixedPoint iterate_fixed_point(const History& phi, std::span<const double> nodes,
                               const Integrand& integrand, QuadratureKind kind,
                               const Tolerance& tol);

/// J(eta, phi) without validation or copies; the buffers must outlive the view.
class ConcatView final : public PathFunction {
 public:
  ConcatView(const History& phi, const NodeGrid& grid, std::span<const double> eta,
             std::span<const double> deriv);

  int dim() const override { return dim_; }
  double horizon() const override { return grid_->back(); }
  Vec evaluate(double t) const override;
  void breakpoints(double lo, double hi, std::vector<double>& out) const override;

 private:
  const History* phi_;
  const NodeGrid* grid_;
  std::span<const double> eta_;
  std::span<const double> deriv_;
  Vec phi0_;
  int dim_;
};

}  // namespace detail

}  // namespace fdeflow
