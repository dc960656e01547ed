#include "fdeflow/picard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>

#include "fdeflow/errors.hpp"

namespace fdeflow {

void SolverConfig::validate() const {
  if (!(grid_step > 0.0)) throw InvariantError("SolverConfig: grid_step must be positive");
  tol.validate();
  if (!(s_min > 0.0)) throw InvariantError("SolverConfig: s_min must be positive");
  if (max_halvings < 0) throw InvariantError("SolverConfig: max_halvings must be >= 0");
  if (!(max_initial_step > 0.0)) throw InvariantError("SolverConfig: bad initial step");
  if (!(safety >= 1.0)) throw InvariantError("SolverConfig: safety must be >= 1");
  if (!(ball_scale > 0.0)) throw InvariantError("SolverConfig: ball_scale must be positive");
  if (probe_points < 0 || probe_directions < 0) {
    throw InvariantError("SolverConfig: probe counts must be >= 0");
  }
}

std::vector<double> local_nodes(const StepSpec& spec, double grid_step) {
  std::vector<double> t(static_cast<std::size_t>(spec.panels) + 1);
  const double h = spec.on_grid ? grid_step : spec.length / spec.panels;
  for (int i = 0; i < spec.panels; ++i) t[i] = i * h;
  t.back() = spec.length;
  return t;
}

// ---------------------------------------------------------------------------
// Operators

ForwardPath substitute(const RhsAutonomous& f, const Trajectory& xi) {
  const auto nodes = xi.nodes();
  std::vector<Vec> out;
  out.reserve(nodes.size());
  for (double t : nodes) {
    try {
      out.push_back(eval_f(f, SegmentView(xi, t)));
    } catch (const DomainError& e) {
      throw DomainError(std::string("domain exit at t = ") + std::to_string(t) + ": " + e.what(),
                        t);
    }
  }
  return ForwardPath(std::vector<double>(nodes.begin(), nodes.end()), out);
}

ForwardPath integrate_path(const ForwardPath& psi, QuadratureKind kind) {
  const auto flat = psi.flat_values();
  std::vector<double> eta(flat.size());
  cumulative_integral(psi.nodes(), flat, psi.dim(), kind, eta);
  const auto nodes = psi.nodes();
  return ForwardPath(psi.dim(), std::vector<double>(nodes.begin(), nodes.end()),
                     std::move(eta), true, std::vector<double>(flat.begin(), flat.end()));
}

ForwardPath picard_map(const RhsAutonomous& f, const ForwardPath& eta, HistoryPtr phi,
                       QuadratureKind kind) {
  return integrate_path(substitute(f, concat(eta, std::move(phi))), kind);
}

// ---------------------------------------------------------------------------
// Fixed-point iteration

namespace detail {

ConcatView::ConcatView(const History& phi, const NodeGrid& grid, std::span<const double> eta,
                       std::span<const double> deriv)
    : phi_(&phi), grid_(&grid), eta_(eta), deriv_(deriv), phi0_(phi.evaluate(0.0)),
      dim_(phi.dim()) {}

Vec ConcatView::evaluate(double t) const {
  if (t <= 0.0) return phi_->evaluate(t);
  if (t > grid_->back() + kTimeSlack) {
    throw DomainError("step path evaluated beyond the step", t);
  }
  return phi0_ + interpolate(*grid_, eta_, deriv_, dim_, std::min(t, grid_->back()));
}

void ConcatView::breakpoints(double lo, double hi, std::vector<double>& out) const {
  if (lo < 0.0) {
    std::vector<double> b;
    phi_->breakpoints(lo, b);
    for (double s : b) {
      if (s < 0.0 && s <= hi) out.push_back(s);
    }
  }
  for (double t : grid_->times()) {
    if (t >= lo && t <= hi) out.push_back(t);
  }
}

FixedPoint iterate_fixed_point(const History& phi, std::span<const double> nodes,
                               const Integrand& integrand, QuadratureKind kind,
                               const Tolerance& tol) {
  const int n = phi.dim();
  const std::size_t count = nodes.size();
  const NodeGrid grid(std::vector<double>(nodes.begin(), nodes.end()));
  const double phi0_norm = phi.evaluate(0.0).norm();

  std::vector<double> eta(count * n, 0.0);
  std::vector<double> psi(count * n, 0.0);
  std::vector<double> next(count * n, 0.0);

  auto sweep = [&](const std::vector<double>& eta_in, const std::vector<double>& deriv_in,
                   std::vector<double>& psi_out) {
    const ConcatView x(phi, grid, eta_in, deriv_in);
    for (std::size_t i = 0; i < count; ++i) {
      const Vec v = integrand(i, nodes[i], SegmentView(x, nodes[i]));
      for (int k = 0; k < n; ++k) psi_out[i * n + k] = v[k];
    }
  };

  {
    const std::vector<double> zero(count * n, 0.0);
    sweep(zero, zero, psi);
  }

  FixedPoint out;
  double prev = 0.0;
  for (int it = 1; it <= tol.max_iters; ++it) {
    cumulative_integral(nodes, psi, n, kind, next);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double d2 = 0.0;
      double e2 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = next[i * n + k] - eta[i * n + k];
        d2 += d * d;
        e2 += next[i * n + k] * next[i * n + k];
      }
      diff = std::max(diff, std::sqrt(d2));
      scale = std::max(scale, std::sqrt(e2));
    }
    if (!std::isfinite(diff)) {
      throw NonconvergenceError("Picard iteration produced non-finite values", it, diff);
    }
    eta.swap(next);
    // Derivative samples of the new iterate are the integrand it was built from.
    std::vector<double> psi_next(count * n);
    sweep(eta, psi, psi_next);
    psi.swap(psi_next);

    if (it > 1) out.report.ratios.push_back(prev > 0.0 ? diff / prev : 0.0);
    prev = diff;
    out.report.iterations = it;
    out.report.residual = diff;
    if (diff <= tol.threshold(phi0_norm + scale)) {
      out.eta = std::move(eta);
      out.psi = std::move(psi);
      return out;
    }
  }
  throw NonconvergenceError("Picard iteration did not converge within " +
                                std::to_string(tol.max_iters) + " iterations",
                            out.report.iterations, out.report.residual);
}

}  // namespace detail

LocalSolution solve_local(const RhsAutonomous& f, HistoryPtr phi, const StepSpec& step,
                          const SolverConfig& cfg) {
  if (!(step.length > 0.0) || step.panels < 1) {
    throw InvariantError("solve_local: step needs positive length and >= 1 panel");
  }
  const auto nodes = local_nodes(step, cfg.grid_step);
  const auto integrand = [&f](std::size_t, double u, const History& seg) {
    try {
      return eval_f(f, seg);
    } catch (const DomainError& e) {
      throw DomainError(std::string("domain exit at local time ") + std::to_string(u) + ": " +
                            e.what(),
                        u);
    }
  };
  auto fp = detail::iterate_fixed_point(*phi, nodes, integrand, cfg.quadrature, cfg.tol);
  const Vec p0 = phi->evaluate(0.0);
  const int n = phi->dim();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int k = 0; k < n; ++k) fp.eta[i * n + k] += p0[k];
  }
  for (int k = 0; k < n; ++k) fp.eta[k] = p0[k];
  return {Trajectory(std::move(phi), nodes, std::move(fp.eta), std::move(fp.psi)),
          std::move(fp.report)};
}

// ---------------------------------------------------------------------------
// Step planning

namespace {

// s -> phi(min(w + s, 0)): the segment at time w of the constant prolongation.
class ShiftedProlongation final : public History {
 public:
  ShiftedProlongation(const History& phi, double w) : phi_(&phi), w_(w) {}
  int dim() const override { return phi_->dim(); }
  Vec evaluate(double s) const override { return phi_->evaluate(std::min(w_ + s, 0.0)); }

 private:
  const History* phi_;
  double w_;
};

HistoryFunction random_direction(std::mt19937_64& rng, int dim, double window) {
  constexpr int kPieces = 8;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> nodes(kPieces + 1);
  std::vector<Vec> values(kPieces + 1, Vec(dim));
  double sup = 0.0;
  for (int i = 0; i <= kPieces; ++i) {
    nodes[i] = (i == kPieces) ? 0.0 : -window * (kPieces - i) / kPieces;
    for (int k = 0; k < dim; ++k) values[i][k] = u(rng);
    sup = std::max(sup, values[i].norm());
  }
  for (auto& v : values) v /= sup;
  return HistoryFunction(std::move(nodes), values);
}

StepSpec snap(double candidate, double remaining, double grid_step) {
  StepSpec s;
  if (candidate >= remaining) {
    const double r = remaining / grid_step;
    s.panels = std::max(1, static_cast<int>(std::ceil(r - 1e-9)));
    s.on_grid = std::abs(s.panels - r) <= 1e-9 * std::max(1.0, r);
    s.length = s.on_grid ? s.panels * grid_step : remaining;
  } else if (candidate >= grid_step) {
    s.panels = static_cast<int>(std::floor(candidate / grid_step + 1e-9));
    s.on_grid = true;
    s.length = s.panels * grid_step;
  } else {
    s.panels = 1;
    s.length = candidate;
  }
  return s;
}

}  // namespace

double measure_contraction(const RhsAutonomous& f, HistoryPtr phi, const StepSpec& step,
                           double eps, const SolverConfig& cfg, int pairs,
                           std::uint64_t seed) {
  const int n = f.dim;
  const auto nodes = local_nodes(step, cfg.grid_step);
  const double S = step.length;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // sum_k a_k sin(k pi t / 2S): smooth, zero at 0, sup at most radius.
  auto random_path = [&](double radius) {
    constexpr int kModes = 3;
    Mat a(n, kModes);
    for (int k = 0; k < kModes; ++k) {
      for (int c = 0; c < n; ++c) a(c, k) = u(rng);
    }
    a *= radius / (std::sqrt(static_cast<double>(n)) * kModes);
    std::vector<Vec> values;
    std::vector<Vec> derivs;
    for (double t : nodes) {
      Vec v = Vec::Zero(n);
      Vec d = Vec::Zero(n);
      for (int k = 0; k < kModes; ++k) {
        const double w = (k + 1) * std::numbers::pi / (2.0 * S);
        v += a.col(k) * std::sin(w * t);
        d += a.col(k) * (w * std::cos(w * t));
      }
      values.push_back(v);
      derivs.push_back(d);
    }
    values.front().setZero();
    return ForwardPath(nodes, values, true, derivs);
  };
  auto sup_diff = [](const ForwardPath& a, const ForwardPath& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a.value(i) - b.value(i)).norm());
    return m;
  };

  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const ForwardPath e1 = random_path(eps / 2.0);
    const ForwardPath e2 = random_path(eps / 2.0);
    const double d = sup_diff(e1, e2);
    if (d == 0.0) continue;
    const ForwardPath b1 = picard_map(f, e1, phi, cfg.quadrature);
    const ForwardPath b2 = picard_map(f, e2, phi, cfg.quadrature);
    worst = std::max(worst, sup_diff(b1, b2) / d);
  }
  return worst;
}

StepPlan plan_step(const RhsAutonomous& f, const History& phi, const SolverConfig& cfg,
                   const PlanContext& ctx) {
  cfg.validate();
  if (!in_domain(f, phi)) throw DomainError(f.name + ": initial state outside the domain");
  if (!(ctx.remaining > 0.0)) throw InvariantError("plan_step: nothing left to integrate");

  const int n = f.dim;
  const double window = f.delay_horizon + (f.growing_delay ? ctx.elapsed : 0.0);
  double s0 = std::min({window, cfg.max_initial_step, ctx.remaining});

  StepPlan plan;
  plan.eps = cfg.ball_scale * (1.0 + phi.evaluate(0.0).lpNorm<Eigen::Infinity>());

  std::mt19937_64 rng(cfg.seed);
  std::vector<HistoryFunction> directions;
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e[k] = 1.0;
    directions.push_back(HistoryFunction::constant(e));
  }
  for (int k = 0; k < cfg.probe_directions; ++k) {
    directions.push_back(random_direction(rng, n, window));
  }

  auto probe = [&](const History& at) {
    double m = 0.0;
    for (const auto& chi : directions) m = std::max(m, eval_df(f, at, chi).norm());
    return m;
  };
  plan.df_norm_at_phi = probe(phi);
  double lhat = plan.df_norm_at_phi;
  for (int k = 1; k <= cfg.probe_points; ++k) {
    const ShiftedProlongation base(phi, s0 * k / cfg.probe_points);
    const HistoryFunction rho = random_direction(rng, n, window);
    const CombinationView point(1.0, base, plan.eps, rho);
    try {
      if (in_domain(f, point)) lhat = std::max(lhat, probe(point));
    } catch (const DomainError&) {
      // Probe left the domain; the remaining probes still bound L-hat.
    }
  }
  plan.lipschitz_est = cfg.safety * lhat;

  // f along P_0S phi does not depend on S, so grid-node values are shared
  // between candidates.
  std::unordered_map<int, Vec> on_grid_values;
  auto f_at = [&](double u, int grid_index) -> Vec {
    if (grid_index >= 0) {
      auto it = on_grid_values.find(grid_index);
      if (it != on_grid_values.end()) return it->second;
    }
    Vec v = eval_f(f, ShiftedProlongation(phi, u));
    if (grid_index >= 0) on_grid_values.emplace(grid_index, v);
    return v;
  };

  double candidate = s0;
  for (int halvings = 0;; ++halvings) {
    const StepSpec step = snap(candidate, ctx.remaining, cfg.grid_step);
    if (step.length < cfg.s_min) {
      throw StepSelectionError("no admissible step above s_min (probable blow-up or stiffness)",
                               step.length);
    }
    const double kappa = plan.lipschitz_est * step.length;
    if (kappa <= 0.5) {
      const auto nodes = local_nodes(step, cfg.grid_step);
      Vec acc = Vec::Zero(n);
      Vec prev = f_at(0.0, 0);
      double sup = 0.0;
      for (std::size_t i = 1; i < nodes.size(); ++i) {
        const Vec cur = f_at(nodes[i], step.on_grid ? static_cast<int>(i) : -1);
        acc += 0.5 * (nodes[i] - nodes[i - 1]) * (prev + cur);
        sup = std::max(sup, acc.norm());
        prev = cur;
      }
      if (sup < plan.eps / 8.0) {
        plan.step = step;
        plan.contraction_bound = kappa;
        plan.smallness = sup;
        plan.halvings = halvings;
        return plan;
      }
    }
    if (halvings >= cfg.max_halvings) {
      throw StepSelectionError("step halving limit reached (probable blow-up or stiffness)",
                               step.length);
    }
    candidate = 0.5 * step.length;
  }
}

}  // namespace fdeflow
