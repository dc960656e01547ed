#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdeflow::checks {

namespace {

void require(const Problem& p, bool ok, const std::string& suite, const char* need) {
  if (!ok) {
    throw std::invalid_argument("suite '" + suite + "' needs " + need + " problem, '" + p.name +
                                "' is " + to_string(p.kind));
  }
}

CheckResult make(std::string suite, const Problem& p, double measured, double threshold,
                 std::string note = {}) {
  CheckResult r;
  r.suite = std::move(suite);
  r.problem = p.name;
  r.measured = measured;
  r.threshold = threshold;
  r.pass = measured <= threshold;
  r.note = std::move(note);
  return r;
}

HistoryPtr default_phi(const Problem& p) { return parse_history(p.default_history, p.dim()); }

}  // namespace

RhsAutonomous autonomous_rhs(const Problem& p) {
  return p.kind == ProblemKind::Autonomous ? p.f : augment(p.g);
}

HistoryPtr autonomous_history(const Problem& p, const std::string& history_spec) {
  HistoryPtr phi = parse_history(history_spec, p.dim());
  if (p.kind == ProblemKind::Autonomous) return phi;
  return std::make_shared<StackedHistory>(std::make_shared<ClockHistory>(0.0), phi);
}

ContractionStats contraction_stats(const Problem& p, const std::string& history_spec,
                                   double horizon, const SolverConfig& cfg, int pairs,
                                   std::uint64_t seed) {
  const RhsAutonomous f = autonomous_rhs(p);
  ContractionStats out;
  out.run = semiflow(f, autonomous_history(p, history_spec), horizon, cfg);
  for (std::size_t i = 0; i < out.run.steps.size(); ++i) {
    const StepRecord& step = out.run.steps[i];
    for (double r : step.report.ratios) out.worst_sweep_ratio = std::max(out.worst_sweep_ratio, r);
    out.worst_pair_ratio = std::max(
        out.worst_pair_ratio, measure_contraction(f, out.run.state(step.start), step.spec,
                                                  step.plan.eps, cfg, pairs, seed + i));
    ++out.plans;
  }
  return out;
}

CheckResult check_semigroup_suite(const Problem& p, const SolverConfig& cfg) {
  require(p, p.kind == ProblemKind::Autonomous, "semigroup", "an autonomous");
  const double t = 0.35 * p.default_horizon;
  const double d = check_semigroup(p.f, default_phi(p), t, t, SeminormIndex(2), cfg);
  return make("semigroup", p, d, 1e-5, "s = t = " + format_double(t) + ", j = 2");
}

CheckResult check_uniqueness_suite(const Problem& p, const SolverConfig& cfg) {
  require(p, p.kind == ProblemKind::Autonomous, "uniqueness", "an autonomous");
  SchedulePolicy halved;
  halved.scale = 0.5;
  const double d =
      check_uniqueness(p.f, default_phi(p), p.default_horizon, cfg, SchedulePolicy{}, halved);
  return make("uniqueness", p, d, 1e-6, "schedules S and S/2");
}

CheckResult check_cocycle_suite(const Problem& p, const SolverConfig& cfg) {
  require(p, p.kind != ProblemKind::Autonomous, "cocycle", "a nonautonomous");
  const double t = 0.25 * p.default_horizon;
  const double s = 0.5 * p.default_horizon;
  const double d = check_cocycle(p.g, s, t, 0.0, default_phi(p), SeminormIndex(2), cfg);
  return make("cocycle", p, d, 1e-5,
              "(t0, t, s) = (0, " + format_double(t) + ", " + format_double(s) + ")");
}

CheckResult check_clock_suite(const Problem& p, const SolverConfig& cfg) {
  require(p, p.kind != ProblemKind::Autonomous, "clock", "a nonautonomous");
  const ProcessRun run = process(p.g, p.default_horizon, 0.0, default_phi(p), cfg);
  if (!run.ok()) return make("clock", p, INFINITY, 1e-12, run.run.message);
  return make("clock", p, clock_defect(run), 1e-12);
}

CheckResult check_contraction_suite(const Problem& p, const SolverConfig& cfg) {
  const auto st = contraction_stats(p, p.default_history, p.default_horizon, cfg, 20, cfg.seed);
  const double worst = std::max(st.worst_pair_ratio, st.worst_sweep_ratio);
  return make("contraction", p, worst, 0.6,
              std::to_string(st.plans) + " plans, pair ratio " +
                  format_double(st.worst_pair_ratio) + ", sweep ratio " +
                  format_double(st.worst_sweep_ratio));
}

CheckResult check_fixed_point_suite(const Problem& p, const SolverConfig& cfg) {
  const RhsAutonomous f = autonomous_rhs(p);
  const SemiflowRun run =
      semiflow(f, autonomous_history(p, p.default_history), p.default_horizon, cfg);
  double scale = 0.0;
  for (std::size_t i = 0; i < run.trajectory->size(); ++i) {
    scale = std::max(scale, run.trajectory->value(i).norm());
  }
  return make("fixed_point", p, fixed_point_residual(f, run, cfg),
              2.0 * cfg.tol.threshold(scale));
}

CheckResult check_variational_suite(const Problem& p, const SolverConfig& cfg) {
  require(p, p.kind == ProblemKind::Autonomous, "variational", "an autonomous");
  const double t = p.default_horizon;
  const SemiflowRun base = semiflow(p.f, default_phi(p), t, cfg);
  if (!base.ok()) return make("variational", p, INFINITY, 1e-4, base.message);
  const HistoryPtr dir = parse_history("const:1", p.dim());
  const VariationalRun v = solve_variational(p.f, base, dir, t, cfg);
  const ForwardPath fd = fd_solution_derivative(p.f, base, dir, t, 1e-4, cfg);
  return make("variational", p, max_node_distance(*v.v, fd), 1e-4, "h = 1e-4");
}

CheckResult check_vide_routes_suite(const Problem& p, const SolverConfig& cfg) {
  require(p, p.kind == ProblemKind::Vide, "vide_routes", "a VIDE");
  const ProcessRun run = solve_vide(p.vide, p.default_horizon, cfg);
  if (!run.ok()) return make("vide_routes", p, INFINITY, 5e-6, run.run.message);
  const Trajectory x = run.path();
  const ForwardPath direct = volterra_direct(p.vide, p.default_horizon, cfg.grid_step);
  double d = 0.0;
  for (std::size_t i = 0; i < direct.size(); ++i) {
    d = std::max(d, (x.evaluate(std::min(direct.nodes()[i], x.horizon())) - direct.value(i))
                        .norm());
  }
  return make("vide_routes", p, d, 5e-6);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"semigroup",   "uniqueness",  "cocycle",
                                              "clock",       "contraction", "fixed_point",
                                              "variational", "vide_routes"};
  return names;
}

std::string default_problem_for(const std::string& suite) {
  if (suite == "semigroup" || suite == "contraction" || suite == "fixed_point") {
    return "linear_const_delay";
  }
  if (suite == "uniqueness") return "linear_ode";
  if (suite == "cocycle" || suite == "clock") return "pantograph";
  if (suite == "variational") return "quadratic";
  if (suite == "vide_routes") return "cosh";
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

CheckResult run_suite(const std::string& suite, const Problem& p, const SolverConfig& cfg) {
  if (suite == "semigroup") return check_semigroup_suite(p, cfg);
  if (suite == "uniqueness") return check_uniqueness_suite(p, cfg);
  if (suite == "cocycle") return check_cocycle_suite(p, cfg);
  if (suite == "clock") return check_clock_suite(p, cfg);
  if (suite == "contraction") return check_contraction_suite(p, cfg);
  if (suite == "fixed_point") return check_fixed_point_suite(p, cfg);
  if (suite == "variational") return check_variational_suite(p, cfg);
  if (suite == "vide_routes") return check_vide_routes_suite(p, cfg);
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

}  // namespace fdeflow::checks
