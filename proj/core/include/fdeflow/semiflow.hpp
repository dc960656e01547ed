#pragma once

#include <string>
#include <vector>

#include "fdeflow/history.hpp"
#include "fdeflow/picard.hpp"
#include "fdeflow/rhs.hpp"

namespace fdeflow {

enum class Termination { HorizonReached, StepSelectionFailed, DomainExit, Nonconvergence };

const char* to_string(Termination t);

struct StepRecord {
  double start = 0.0;
  std::size_t first_node = 0;  // index of `start` in the global trajectory
  StepSpec spec;
  StepPlan plan;  // default-initialized for replayed steps
  PicardReport report;
};

/// Overrides for the step schedule. Steps in `fixed` are replayed verbatim
/// (no planning); afterwards planned lengths are multiplied by `scale`.
struct SchedulePolicy {
  double scale = 1.0;
  std::vector<StepSpec> fixed;
};

struct SemiflowRun {
  HistoryPtr phi;
  TrajectoryPtr trajectory;
  double reached_time = 0.0;
  Termination termination = Termination::HorizonReached;
  std::string message;
  std::vector<StepRecord> steps;

  bool ok() const { return termination == Termination::HorizonReached; }
  int total_picard_iterations() const;
  std::vector<StepSpec> schedule() const;
  /// x_t as a history sharing the trajectory. Throws HorizonError past reached_time.
  HistoryPtr state(double t) const;
};

/// Sigma(t, phi): chained local solves, re-planned at every new segment.
SemiflowRun semiflow(const RhsAutonomous& f, HistoryPtr phi, double t, const SolverConfig& cfg,
                     const SchedulePolicy& policy = {});

/// |Sigma(s, Sigma(t, phi)) - Sigma(s + t, phi)|_j.
double check_semigroup(const RhsAutonomous& f, HistoryPtr phi, double s, double t,
                       SeminormIndex j, const SolverConfig& cfg);

/// Max over nodes in [0, t] of the difference of two runs with different schedules.
/// Nodes of the second run are compared by evaluating the first there.
double check_uniqueness(const RhsAutonomous& f, HistoryPtr phi, double t,
                        const SolverConfig& cfg, const SchedulePolicy& a,
                        const SchedulePolicy& b);

/// max over steps and nodes of |x(t) - x(t_n) - int_{t_n}^t f(x_u) du|.
double fixed_point_residual(const RhsAutonomous& f, const SemiflowRun& run,
                            const SolverConfig& cfg);

}  // namespace fdeflow
