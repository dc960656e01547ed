#pragma once

#include <vector>

#include "fdeflow/history.hpp"
#include "fdeflow/picard.hpp"
#include "fdeflow/rhs.hpp"
#include "fdeflow/semiflow.hpp"

namespace fdeflow {

/// v' = Df(x_u) v_u along a computed trajectory, v_0 = direction.
struct VariationalRun {
  TrajectoryPtr base;
  HistoryPtr direction;
  TrajectoryPtr v;
  std::vector<PicardReport> reports;

  /// v_t; for t + s <= 0 this is direction(t + s).
  HistoryPtr state(double t) const;
};

/// Uses the base run's step schedule and nodes. Covers every base step that
/// starts before t, so v.horizon() >= t.
VariationalRun solve_variational(const RhsAutonomous& f, const SemiflowRun& base,
                                 HistoryPtr direction, double t, const SolverConfig& cfg);

/// (x^{phi + h dir}(u) - x^{phi - h dir}(u)) / 2h at the nodes of the base run
/// in [0, t]. Both perturbed runs replay the base schedule.
ForwardPath fd_solution_derivative(const RhsAutonomous& f, const SemiflowRun& base,
                                   HistoryPtr direction, double t, double h,
                                   const SolverConfig& cfg);

/// Convenience overload that computes the base run first.
ForwardPath fd_solution_derivative(const RhsAutonomous& f, HistoryPtr phi, HistoryPtr direction,
                                   double t, double h, const SolverConfig& cfg);

/// Max node distance between v and an oracle path on the oracle's nodes.
double max_node_distance(const Trajectory& v, const ForwardPath& oracle);

}  // namespace fdeflow
