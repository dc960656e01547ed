#pragma once

// Property suites shared by `fdeflow check` and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include <fdeflow/fdeflow.hpp>

namespace fdeflow::checks {

struct CheckResult {
  std::string suite;
  std::string problem;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

/// Autonomous view of any registry problem (clock-augmented when needed).
RhsAutonomous autonomous_rhs(const Problem& p);

/// Default initial history of the autonomous view.
HistoryPtr autonomous_history(const Problem& p, const std::string& history_spec);

struct ContractionStats {
  double worst_pair_ratio = 0.0;
  double worst_sweep_ratio = 0.0;
  int plans = 0;
  SemiflowRun run;
};

/// Runs the problem to `horizon` and probes every planned step with random
/// eta pairs.
ContractionStats contraction_stats(const Problem& p, const std::string& history_spec,
                                   double horizon, const SolverConfig& cfg, int pairs,
                                   std::uint64_t seed);

CheckResult check_semigroup_suite(const Problem& p, const SolverConfig& cfg);
CheckResult check_uniqueness_suite(const Problem& p, const SolverConfig& cfg);
CheckResult check_cocycle_suite(const Problem& p, const SolverConfig& cfg);
CheckResult check_clock_suite(const Problem& p, const SolverConfig& cfg);
CheckResult check_contraction_suite(const Problem& p, const SolverConfig& cfg);
CheckResult check_fixed_point_suite(const Problem& p, const SolverConfig& cfg);
CheckResult check_variational_suite(const Problem& p, const SolverConfig& cfg);
CheckResult check_vide_routes_suite(const Problem& p, const SolverConfig& cfg);

const std::vector<std::string>& suite_names();

/// Registry problem each suite uses when none is given.
std::string default_problem_for(const std::string& suite);

/// Runs one named suite; throws std::invalid_argument for unknown names or
/// problems of the wrong kind.
CheckResult run_suite(const std::string& suite, const Problem& p, const SolverConfig& cfg);

}  // namespace fdeflow::checks
