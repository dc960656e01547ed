#include "fdeflow/vide.hpp"

#include <cmath>
#include <limits>

#include "fdeflow/errors.hpp"

namespace fdeflow {

void VideProblem::validate() const {
  if (dim < 1 || dim >= kMaxDim) throw InvariantError("VideProblem: bad dimension");
  if (!kernel || !h) throw InvariantError("VideProblem: kernel and h are required");
  if (x0.size() != dim) throw InvariantError("VideProblem: x0 has wrong dimension");
}

Mat shifted_kernel(const VideProblem& p, double t, double s) { return p.kernel(t, t + s); }

namespace {

Mat jacobian(const VideProblem& p, const Vec& x) {
  if (p.dh) return p.dh(x);
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Mat J(p.dim, p.dim);
  for (int k = 0; k < p.dim; ++k) {
    const double step = base * (1.0 + std::abs(x[k]));
    Vec a = x;
    Vec b = x;
    a[k] += step;
    b[k] -= step;
    J.col(k) = (p.h(a) - p.h(b)) / (2.0 * step);
  }
  return J;
}

Mat kernel_time_derivative(const VideProblem& p, double t, double s) {
  if (p.kernel_dt && p.kernel_ds) return p.kernel_dt(t, t + s) + p.kernel_ds(t, t + s);
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  const double step = base * (1.0 + std::abs(t));
  return (shifted_kernel(p, t + step, s) - shifted_kernel(p, t - step, s)) / (2.0 * step);
}

// Signed trapezoid over [-t, 0]; `term(s)` is the integrand.
template <typename Term>
Vec signed_trapezoid(int dim, double t, double quad_step, Term term) {
  if (!(quad_step > 0.0)) throw InvariantError("vide: quadrature step must be positive");
  Vec sum = Vec::Zero(dim);
  if (t == 0.0) return sum;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(t) / quad_step - 1e-9)));
  const double w = t / panels;
  for (int i = 0; i <= panels; ++i) {
    const double s = (i == panels) ? 0.0 : -t + i * w;
    const double c = (i == 0 || i == panels) ? 0.5 : 1.0;
    sum += c * term(s);
  }
  return w * sum;
}

}  // namespace

ForwardPath substitute_h(const VideProblem& p, const ForwardPath& psi) {
  std::vector<Vec> out;
  out.reserve(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out.push_back(p.h(psi.value(i)));
  const auto nodes = psi.nodes();
  return ForwardPath(std::vector<double>(nodes.begin(), nodes.end()), out);
}

ForwardPath substitute_h_deriv(const VideProblem& p, const ForwardPath& psi,
                               const ForwardPath& chi) {
  if (psi.size() != chi.size()) throw AlignmentError("substitute_h_deriv: node mismatch");
  std::vector<Vec> out;
  out.reserve(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    out.push_back(jacobian(p, psi.value(i)) * chi.value(i));
  }
  const auto nodes = psi.nodes();
  return ForwardPath(std::vector<double>(nodes.begin(), nodes.end()), out);
}

Vec vide_g(const VideProblem& p, double t, const History& phi, double quad_step) {
  return signed_trapezoid(p.dim, t, quad_step, [&](double s) -> Vec {
    return shifted_kernel(p, t, s) * p.h(odd_prolong(phi, s));
  });
}

Vec vide_g_dphi(const VideProblem& p, double t, const History& phi, const History& chi,
                double quad_step) {
  return signed_trapezoid(p.dim, t, quad_step, [&](double s) -> Vec {
    return shifted_kernel(p, t, s) * (jacobian(p, odd_prolong(phi, s)) * odd_prolong(chi, s));
  });
}

Vec vide_g_dt(const VideProblem& p, double t, const History& phi, double quad_step) {
  const Vec boundary = shifted_kernel(p, t, -t) * p.h(odd_prolong(phi, -t));
  return boundary + signed_trapezoid(p.dim, t, quad_step, [&](double s) -> Vec {
           return kernel_time_derivative(p, t, s) * p.h(odd_prolong(phi, s));
         });
}

RhsNonautonomous make_vide_rhs(const VideProblem& p, double quad_step) {
  p.validate();
  RhsNonautonomous g;
  g.name = p.name;
  g.dim = p.dim;
  g.delay_horizon = 1.0;
  g.growing_delay = true;
  g.eval = [p, quad_step](double t, const History& phi) {
    return vide_g(p, t, phi, quad_step);
  };
  g.dphi_deriv = [p, quad_step](double t, const History& phi, const History& chi) {
    return vide_g_dphi(p, t, phi, chi, quad_step);
  };
  g.dt_partial = [p, quad_step](double t, const History& phi) {
    return vide_g_dt(p, t, phi, quad_step);
  };
  return g;
}

ProcessRun solve_vide(const VideProblem& p, double T, const SolverConfig& cfg) {
  if (!(T >= 0.0)) throw InvariantError("solve_vide: horizon must be >= 0");
  return process(make_vide_rhs(p, cfg.grid_step), T, 0.0, make_constant_history(p.x0), cfg);
}

ForwardPath volterra_direct(const VideProblem& p, double T, double step) {
  p.validate();
  if (!(T > 0.0) || !(step > 0.0)) throw InvariantError("volterra_direct: need T, step > 0");
  const int M = std::max(1, static_cast<int>(std::ceil(T / step - 1e-9)));
  const double dt = T / M;
  std::vector<double> t(M + 1);
  for (int m = 0; m <= M; ++m) t[m] = (m == M) ? T : m * dt;

  std::vector<Vec> x(M + 1);
  std::vector<Vec> hx(M + 1);
  x[0] = p.x0;
  hx[0] = p.h(x[0]);

  // Trapezoid approximation of int_0^{t_m} k(t_m, s) h(x(s)) ds.
  auto memory = [&](int m) {
    Vec sum = Vec::Zero(p.dim);
    if (m == 0) return sum;
    for (int j = 0; j <= m; ++j) {
      const double c = (j == 0 || j == m) ? 0.5 : 1.0;
      sum += c * (p.kernel(t[m], t[j]) * hx[j]);
    }
    return Vec(dt * sum);
  };

  for (int m = 0; m < M; ++m) {
    const Vec phi_m = memory(m);
    hx[m + 1] = p.h(x[m] + dt * phi_m);
    const Vec phi_pred = memory(m + 1);
    x[m + 1] = x[m] + 0.5 * dt * (phi_m + phi_pred);
    hx[m + 1] = p.h(x[m + 1]);
  }
  return ForwardPath(std::move(t), x);
}

}  // namespace fdeflow
