#include "fdeflow/process.hpp"

#include <algorithm>
#include <cmath>

#include "fdeflow/errors.hpp"

namespace fdeflow {

Vec ClockHistory::evaluate(double s) const {
  if (s > kTimeSlack) throw DomainError("clock history evaluated at s > 0", s);
  return scalar_vec(t0_ + std::min(s, 0.0));
}

StackedHistory::StackedHistory(HistoryPtr clock, HistoryPtr phi)
    : clock_(std::move(clock)), phi_(std::move(phi)) {
  if (!clock_ || !phi_ || clock_->dim() != 1) {
    throw InvariantError("StackedHistory: need a scalar clock and a history");
  }
  if (1 + phi_->dim() > kMaxDim) throw InvariantError("StackedHistory: dimension too large");
}

Vec StackedHistory::evaluate(double s) const {
  const int n = phi_->dim();
  Vec out(1 + n);
  out[0] = clock_->evaluate(s)[0];
  out.tail(n) = phi_->evaluate(s);
  return out;
}

void StackedHistory::breakpoints(double lo, std::vector<double>& out) const {
  phi_->breakpoints(lo, out);
}

Projected::Projected(HistoryPtr psi) : psi_(std::move(psi)) {
  if (!psi_ || psi_->dim() < 2) throw InvariantError("Projected: need dimension >= 2");
}

RhsAutonomous augment(const RhsNonautonomous& g) {
  if (g.dim + 1 > kMaxDim) throw InvariantError("augment: dimension too large");
  RhsAutonomous f;
  f.name = g.name;
  f.dim = g.dim + 1;
  f.delay_horizon = g.delay_horizon;
  f.growing_delay = g.growing_delay;
  f.eval = [g](const History& psi) {
    const double t = psi.evaluate(0.0)[0];
    Vec out(1 + g.dim);
    out[0] = 1.0;
    out.tail(g.dim) = eval_g(g, t, ProjectedView(psi));
    return out;
  };
  if (g.dphi_deriv && g.dt_partial) {
    f.dir_deriv = [g](const History& psi, const History& chi) {
      const double t = psi.evaluate(0.0)[0];
      const double c0 = chi.evaluate(0.0)[0];
      const ProjectedView p(psi);
      Vec out(1 + g.dim);
      out[0] = 0.0;
      out.tail(g.dim) = g.dphi_deriv(t, p, ProjectedView(chi));
      if (c0 != 0.0) out.tail(g.dim) += c0 * g.dt_partial(t, p);
      return out;
    };
  }
  if (g.in_domain) {
    f.in_domain = [g](const History& psi) {
      return g.in_domain(psi.evaluate(0.0)[0], ProjectedView(psi));
    };
  }
  return f;
}

Trajectory ProcessRun::path() const {
  const Trajectory& x = *run.trajectory;
  const int n = x.dim() - 1;
  const auto nodes = x.nodes();
  std::vector<double> values;
  std::vector<double> derivs;
  values.reserve(nodes.size() * n);
  derivs.reserve(nodes.size() * n);
  const auto xv = x.flat_values();
  const auto xd = x.flat_derivs();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int k = 1; k <= n; ++k) {
      values.push_back(xv[i * (n + 1) + k]);
      if (!xd.empty()) derivs.push_back(xd[i * (n + 1) + k]);
    }
  }
  return Trajectory(std::make_shared<Projected>(run.phi),
                    std::vector<double>(nodes.begin(), nodes.end()), std::move(values),
                    std::move(derivs));
}

ProcessRun process(const RhsNonautonomous& g, double t, double t0, HistoryPtr phi,
                   const SolverConfig& cfg, const SchedulePolicy& policy) {
  if (!phi || phi->dim() != g.dim) throw InvariantError("process: history has wrong dimension");
  if (!(t >= t0)) throw InvariantError("process: need t0 <= t");
  ProcessRun out;
  out.t0 = t0;
  auto start = std::make_shared<StackedHistory>(std::make_shared<ClockHistory>(t0), phi);
  out.run = semiflow(augment(g), start, t - t0, cfg, policy);
  if (out.run.reached_time <= 0.0) {
    out.state = phi;
  } else {
    out.state = std::make_shared<Projected>(out.run.state(out.run.reached_time));
  }
  return out;
}

double check_cocycle(const RhsNonautonomous& g, double s, double t, double t0, HistoryPtr phi,
                     SeminormIndex j, const SolverConfig& cfg) {
  if (!(t0 <= t && t <= s)) throw InvariantError("check_cocycle: need t0 <= t <= s");
  const ProcessRun direct = process(g, s, t0, phi, cfg);
  if (!direct.ok()) throw HorizonError("check_cocycle: direct run failed: " + direct.run.message);
  const ProcessRun inner = process(g, t, t0, phi, cfg);
  if (!inner.ok()) throw HorizonError("check_cocycle: inner run failed: " + inner.run.message);
  const ProcessRun outer = process(g, s, t, inner.state, cfg);
  if (!outer.ok()) throw HorizonError("check_cocycle: outer run failed: " + outer.run.message);
  return seminorm_distance(*outer.state, *direct.state, j);
}

double clock_defect(const ProcessRun& p) {
  const Trajectory& x = *p.run.trajectory;
  const auto nodes = x.nodes();
  const auto v = x.flat_values();
  const int dim = x.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    worst = std::max(worst, std::abs(v[i * dim] - (nodes[i] + p.t0)));
  }
  return worst;
}

}  // namespace fdeflow
