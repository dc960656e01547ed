#include "fdeflow/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fdeflow/errors.hpp"

namespace fdeflow {

void QuadratureRule::validate() const {
  if (panels_per_unit < 1) throw InvariantError("QuadratureRule: panel count must be >= 1");
}

void Tolerance::validate() const {
  if (!(atol > 0.0)) throw InvariantError("Tolerance: atol must be positive");
  if (!(rtol >= 0.0)) throw InvariantError("Tolerance: rtol must be nonnegative");
  if (max_iters < 1) throw InvariantError("Tolerance: max_iters must be >= 1");
}

namespace {

bool is_uniform(std::span<const double> t) {
  if (t.size() < 3) return true;
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(t[i] - (t.front() + static_cast<double>(i) * h)) > 1e-9 * std::abs(h)) {
      return false;
    }
  }
  return true;
}

}  // namespace

Vec integrate(std::span<const double> t, std::span<const Vec> g, QuadratureKind kind) {
  if (t.size() != g.size() || t.empty()) {
    throw AlignmentError("integrate: need one sample per node");
  }
  const int n = static_cast<int>(g.front().size());
  Vec sum = Vec::Zero(n);
  if (t.size() == 1) return sum;
  const std::size_t panels = t.size() - 1;

  if (kind == QuadratureKind::Simpson) {
    if (panels % 2 != 0) throw AlignmentError("integrate: Simpson needs an even panel count");
    if (!is_uniform(t)) throw AlignmentError("integrate: Simpson needs uniform nodes");
    const double h = (t.back() - t.front()) / static_cast<double>(panels);
    for (std::size_t i = 0; i + 2 <= panels; i += 2) {
      sum += (h / 3.0) * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
    }
    return sum;
  }
  for (std::size_t i = 0; i < panels; ++i) {
    sum += 0.5 * (t[i + 1] - t[i]) * (g[i] + g[i + 1]);
  }
  return sum;
}

Vec integrate(const std::function<Vec(double)>& g, double a, double b,
              const QuadratureRule& rule) {
  rule.validate();
  const double len = std::abs(b - a);
  auto panels = static_cast<std::size_t>(
      std::max(1.0, std::ceil(len * rule.panels_per_unit - 1e-9)));
  if (rule.kind == QuadratureKind::Simpson && panels % 2 != 0) ++panels;
  std::vector<double> t(panels + 1);
  std::vector<Vec> v(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    t[i] = (i == panels) ? b : a + (b - a) * static_cast<double>(i) / panels;
    v[i] = g(t[i]);
  }
  return integrate(t, v, rule.kind);
}

void cumulative_integral(std::span<const double> t, std::span<const double> f, int dim,
                         QuadratureKind kind, std::span<double> out) {
  const std::size_t count = t.size();
  if (f.size() != count * dim || out.size() != count * dim) {
    throw AlignmentError("cumulative_integral: buffer sizes do not match the nodes");
  }
  for (int k = 0; k < dim; ++k) out[k] = 0.0;
  if (count < 2) return;

  if (kind == QuadratureKind::Trapezoid || count == 2) {
    for (std::size_t i = 1; i < count; ++i) {
      const double w = 0.5 * (t[i] - t[i - 1]);
      for (int k = 0; k < dim; ++k) {
        out[i * dim + k] = out[(i - 1) * dim + k] + w * (f[(i - 1) * dim + k] + f[i * dim + k]);
      }
    }
    return;
  }

  if (!is_uniform(t)) throw AlignmentError("cumulative_integral: Simpson needs uniform nodes");
  const double h = (t.back() - t.front()) / static_cast<double>(count - 1);
  auto F = [&](std::size_t i, int k) { return f[i * dim + k]; };
  for (int k = 0; k < dim; ++k) {
    // Node 1: quadratic through nodes 0..2 integrated over the first panel.
    out[dim + k] = h / 12.0 * (5.0 * F(0, k) + 8.0 * F(1, k) - F(2, k));
    for (std::size_t i = 2; i < count; i += 2) {
      out[i * dim + k] =
          out[(i - 2) * dim + k] + h / 3.0 * (F(i - 2, k) + 4.0 * F(i - 1, k) + F(i, k));
    }
    for (std::size_t i = 3; i < count; i += 2) {
      out[i * dim + k] = out[(i - 3) * dim + k] + 3.0 * h / 8.0 *
                                                      (F(i - 3, k) + 3.0 * F(i - 2, k) +
                                                       3.0 * F(i - 1, k) + F(i, k));
    }
  }
}

Vec fd_directional(const HistoryMap& F, const History& phi, const History& chi, double h) {
  if (!(h > 0.0)) throw InvariantError("fd_directional: step must be positive");
  const CombinationView plus(1.0, phi, h, chi);
  const CombinationView minus(1.0, phi, -h, chi);
  return (F(plus) - F(minus)) / (2.0 * h);
}

double default_fd_step(const History& phi) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * (1.0 + phi.evaluate(0.0).lpNorm<Eigen::Infinity>());
}

}  // namespace fdeflow
