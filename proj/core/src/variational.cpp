#include "fdeflow/variational.hpp"

#include <algorithm>

#include "fdeflow/errors.hpp"

namespace fdeflow {

HistoryPtr VariationalRun::state(double t) const {
  if (t > v->horizon() + kTimeSlack) throw HorizonError("variational state past its horizon");
  if (t <= 0.0 && t >= 0.0) return direction;
  return std::make_shared<Segment>(v, std::min(t, v->horizon()));
}

VariationalRun solve_variational(const RhsAutonomous& f, const SemiflowRun& base,
                                 HistoryPtr direction, double t, const SolverConfig& cfg) {
  if (!direction || direction->dim() != f.dim) {
    throw InvariantError("solve_variational: direction has wrong dimension");
  }
  if (t > base.reached_time + kTimeSlack) {
    throw HorizonError("solve_variational: base run reached t = " +
                       std::to_string(base.reached_time) + " < " + std::to_string(t));
  }
  const int n = f.dim;
  const Trajectory& x = *base.trajectory;
  const auto gnodes = x.nodes();

  const Vec d0 = direction->evaluate(0.0);
  std::vector<double> nodes{0.0};
  std::vector<double> values(d0.data(), d0.data() + n);
  std::vector<double> derivs(n, 0.0);

  VariationalRun out;
  out.base = base.trajectory;
  out.direction = direction;
  out.v = std::make_shared<Trajectory>(direction, nodes, values, derivs);

  for (const auto& step : base.steps) {
    if (t <= 0.0 || step.start >= t - 1e-9 * cfg.grid_step) break;
    const std::size_t first = step.first_node;
    const HistoryPtr seg =
        first == 0 ? direction : std::make_shared<Segment>(out.v, gnodes[first]);
    const auto local = local_nodes(step.spec, cfg.grid_step);
    const auto integrand = [&](std::size_t i, double, const History& vseg) {
      return eval_df(f, SegmentView(x, gnodes[first + i]), vseg);
    };
    auto fp = detail::iterate_fixed_point(*seg, local, integrand, cfg.quadrature, cfg.tol);
    const Vec s0 = seg->evaluate(0.0);
    if (first == 0) {
      for (int k = 0; k < n; ++k) derivs[k] = fp.psi[k];
    }
    for (std::size_t i = 1; i < local.size(); ++i) {
      nodes.push_back(gnodes[first + i]);
      for (int k = 0; k < n; ++k) {
        values.push_back(s0[k] + fp.eta[i * n + k]);
        derivs.push_back(fp.psi[i * n + k]);
      }
    }
    out.v = std::make_shared<Trajectory>(direction, nodes, values, derivs);
    out.reports.push_back(std::move(fp.report));
  }
  return out;
}

ForwardPath fd_solution_derivative(const RhsAutonomous& f, const SemiflowRun& base,
                                   HistoryPtr direction, double t, double h,
                                   const SolverConfig& cfg) {
  if (!(h > 0.0)) throw InvariantError("fd_solution_derivative: h must be positive");
  SchedulePolicy replay;
  replay.fixed = base.schedule();
  const double horizon = base.reached_time;
  auto perturbed = [&](double sign) {
    auto phi = std::make_shared<LinearCombination>(
        std::vector<std::pair<double, HistoryPtr>>{{1.0, base.phi}, {sign * h, direction}});
    SemiflowRun r = semiflow(f, phi, horizon, cfg, replay);
    if (!r.ok()) throw HorizonError("fd_solution_derivative: perturbed run failed: " + r.message);
    return r;
  };
  const SemiflowRun plus = perturbed(1.0);
  const SemiflowRun minus = perturbed(-1.0);

  const auto gnodes = base.trajectory->nodes();
  std::vector<double> nodes;
  std::vector<Vec> values;
  for (std::size_t i = 0; i < gnodes.size() && gnodes[i] <= t + kTimeSlack; ++i) {
    nodes.push_back(gnodes[i]);
    values.push_back((plus.trajectory->value(i) - minus.trajectory->value(i)) / (2.0 * h));
  }
  if (nodes.size() < 2) {
    // t = 0: a single node; pad so the path has a positive horizon.
    nodes.push_back(std::max(t, kTimeSlack));
    values.push_back(values.front());
  }
  return ForwardPath(std::move(nodes), values);
}

ForwardPath fd_solution_derivative(const RhsAutonomous& f, HistoryPtr phi, HistoryPtr direction,
                                   double t, double h, const SolverConfig& cfg) {
  const SemiflowRun base = semiflow(f, std::move(phi), t, cfg);
  if (!base.ok()) throw HorizonError("fd_solution_derivative: base run failed: " + base.message);
  return fd_solution_derivative(f, base, std::move(direction), t, h, cfg);
}

double max_node_distance(const Trajectory& v, const ForwardPath& oracle) {
  double worst = 0.0;
  const auto nodes = oracle.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] > v.horizon() + kTimeSlack) break;
    worst = std::max(worst, (v.evaluate(nodes[i]) - oracle.value(i)).norm());
  }
  return worst;
}

}  // namespace fdeflow
