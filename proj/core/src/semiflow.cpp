#include "fdeflow/semiflow.hpp"

#include <algorithm>
#include <cmath>

#include "fdeflow/errors.hpp"

namespace fdeflow {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::HorizonReached: return "HorizonReached";
    case Termination::StepSelectionFailed: return "StepSelectionFailed";
    case Termination::DomainExit: return "DomainExit";
    case Termination::Nonconvergence: return "Nonconvergence";
  }
  return "Unknown";
}

int SemiflowRun::total_picard_iterations() const {
  int total = 0;
  for (const auto& s : steps) total += s.report.iterations;
  return total;
}

std::vector<StepSpec> SemiflowRun::schedule() const {
  std::vector<StepSpec> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.spec);
  return out;
}

HistoryPtr SemiflowRun::state(double t) const {
  if (t > reached_time + kTimeSlack) {
    throw HorizonError("run reached t = " + std::to_string(reached_time) +
                       ", state requested at t = " + std::to_string(t));
  }
  if (t <= 0.0 && t >= 0.0) return phi;
  return std::make_shared<Segment>(trajectory, std::min(t, trajectory->horizon()));
}

namespace {

// Append the local solution (minus its first node) to the global samples.
void append(std::vector<double>& nodes, std::vector<double>& values, std::vector<double>& derivs,
            const Trajectory& local, std::size_t first_node, std::size_t grid_base,
            double start, const StepSpec& spec, double grid_step) {
  const int n = local.dim();
  const auto lv = local.flat_values();
  const auto ld = local.flat_derivs();
  // Junction nodes keep the derivative of the step that ended there, so a
  // longer run shares its prefix bit for bit. Only t = 0 has none yet.
  if (first_node == 0) {
    for (int k = 0; k < n; ++k) derivs[k] = ld[k];
  }
  const auto lt = local.nodes();
  for (std::size_t i = 1; i < lt.size(); ++i) {
    nodes.push_back(spec.on_grid ? static_cast<double>(grid_base + i) * grid_step
                                 : start + lt[i]);
    for (int k = 0; k < n; ++k) {
      values.push_back(lv[i * n + k]);
      derivs.push_back(ld[i * n + k]);
    }
  }
}

}  // namespace

SemiflowRun semiflow(const RhsAutonomous& f, HistoryPtr phi, double t, const SolverConfig& cfg,
                     const SchedulePolicy& policy) {
  cfg.validate();
  if (!phi) throw InvariantError("semiflow: null initial history");
  if (phi->dim() != f.dim) throw InvariantError("semiflow: dimension mismatch");
  if (!(t >= 0.0)) throw InvariantError("semiflow: t must be >= 0");
  if (!(policy.scale > 0.0 && policy.scale <= 1.0)) {
    throw InvariantError("semiflow: schedule scale must lie in (0, 1]");
  }

  const int n = f.dim;
  const Vec p0 = phi->evaluate(0.0);
  std::vector<double> nodes{0.0};
  std::vector<double> values(p0.data(), p0.data() + n);
  std::vector<double> derivs(n, 0.0);

  SemiflowRun run;
  run.phi = phi;
  run.trajectory = std::make_shared<Trajectory>(phi, nodes, values, derivs);

  double now = 0.0;
  std::size_t grid_index = 0;  // valid while `aligned`
  bool aligned = true;
  const double end_slack = 1e-9 * cfg.grid_step;

  try {
    while (now < t - end_slack) {
      const double remaining = t - now;
      const HistoryPtr seg =
          now == 0.0 ? phi : std::make_shared<Segment>(run.trajectory, now);
      if (!in_domain(f, *seg)) {
        throw DomainError(f.name + ": state left the domain", now);
      }

      StepRecord rec;
      rec.start = now;
      rec.first_node = nodes.size() - 1;
      const std::size_t k = run.steps.size();
      if (k < policy.fixed.size()) {
        rec.spec = policy.fixed[k];
      } else {
        rec.plan = plan_step(f, *seg, cfg, {remaining, now});
        rec.spec = rec.plan.step;
        if (policy.scale < 1.0) {
          // On-grid steps shrink by whole panels but never below one grid step.
          if (rec.spec.on_grid) {
            rec.spec.panels = std::max(
                1, static_cast<int>(std::floor(rec.spec.panels * policy.scale + 1e-9)));
            rec.spec.length = rec.spec.panels * cfg.grid_step;
          } else {
            rec.spec = {rec.spec.length * policy.scale, 1, false};
          }
        }
      }
      if (!aligned) rec.spec.on_grid = false;

      LocalSolution local = solve_local(f, seg, rec.spec, cfg);
      rec.report = std::move(local.report);

      append(nodes, values, derivs, local.x, rec.first_node, grid_index, now, rec.spec,
             cfg.grid_step);
      if (rec.spec.on_grid) {
        grid_index += static_cast<std::size_t>(rec.spec.panels);
        now = static_cast<double>(grid_index) * cfg.grid_step;
      } else {
        aligned = false;
        now = nodes.back();
      }
      run.trajectory = std::make_shared<Trajectory>(phi, nodes, values, derivs);
      run.steps.push_back(std::move(rec));
    }
    run.termination = Termination::HorizonReached;
  } catch (const StepSelectionError& e) {
    run.termination = Termination::StepSelectionFailed;
    run.message = e.what();
  } catch (const DomainError& e) {
    run.termination = Termination::DomainExit;
    run.message = e.what();
  } catch (const NonconvergenceError& e) {
    run.termination = Termination::Nonconvergence;
    run.message = e.what();
  }
  run.reached_time = now;
  return run;
}

double check_semigroup(const RhsAutonomous& f, HistoryPtr phi, double s, double t,
                       SeminormIndex j, const SolverConfig& cfg) {
  const SemiflowRun direct = semiflow(f, phi, s + t, cfg);
  if (!direct.ok()) throw HorizonError("check_semigroup: direct run failed: " + direct.message);
  const SemiflowRun first = semiflow(f, phi, t, cfg);
  if (!first.ok()) throw HorizonError("check_semigroup: inner run failed: " + first.message);
  const SemiflowRun second = semiflow(f, first.state(t), s, cfg);
  if (!second.ok()) throw HorizonError("check_semigroup: outer run failed: " + second.message);
  return seminorm_distance(*second.state(s), *direct.state(s + t), j);
}

double check_uniqueness(const RhsAutonomous& f, HistoryPtr phi, double t,
                        const SolverConfig& cfg, const SchedulePolicy& a,
                        const SchedulePolicy& b) {
  const SemiflowRun ra = semiflow(f, phi, t, cfg, a);
  const SemiflowRun rb = semiflow(f, phi, t, cfg, b);
  if (!ra.ok() || !rb.ok()) throw HorizonError("check_uniqueness: a run did not reach t");
  double worst = 0.0;
  const auto nodes = rb.trajectory->nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] > t + kTimeSlack) break;
    worst = std::max(worst, (rb.trajectory->value(i) - ra.trajectory->evaluate(nodes[i])).norm());
  }
  return worst;
}

double fixed_point_residual(const RhsAutonomous& f, const SemiflowRun& run,
                            const SolverConfig& cfg) {
  const Trajectory& x = *run.trajectory;
  const int n = x.dim();
  double worst = 0.0;
  for (const auto& step : run.steps) {
    const std::size_t count = static_cast<std::size_t>(step.spec.panels) + 1;
    const auto local = local_nodes(step.spec, cfg.grid_step);
    std::vector<double> integrand(count * n);
    std::vector<double> cum(count * n);
    for (std::size_t i = 0; i < count; ++i) {
      const Vec v = eval_f(f, SegmentView(x, x.nodes()[step.first_node + i]));
      for (int k = 0; k < n; ++k) integrand[i * n + k] = v[k];
    }
    cumulative_integral(local, integrand, n, cfg.quadrature, cum);
    const Vec x0 = x.value(step.first_node);
    for (std::size_t i = 0; i < count; ++i) {
      Vec c(n);
      for (int k = 0; k < n; ++k) c[k] = cum[i * n + k];
      worst = std::max(worst, (x.value(step.first_node + i) - x0 - c).norm());
    }
  }
  return worst;
}

}  // namespace fdeflow
