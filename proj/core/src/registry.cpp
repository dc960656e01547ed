#include "fdeflow/registry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include "fdeflow/io.hpp"
#include "fdeflow/numerics.hpp"

namespace fdeflow {

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Autonomous: return "autonomous";
    case ProblemKind::Nonautonomous: return "nonautonomous";
    case ProblemKind::Vide: return "vide";
  }
  return "unknown";
}

int Problem::dim() const {
  switch (kind) {
    case ProblemKind::Autonomous: return f.dim;
    case ProblemKind::Nonautonomous: return g.dim;
    case ProblemKind::Vide: return vide.dim;
  }
  return 0;
}

const std::vector<ProblemInfo>& registry() {
  static const std::vector<ProblemInfo> infos{
      {"linear_const_delay", ProblemKind::Autonomous, "linear_const_delay(a=-1,tau=1)",
       "x'(t) = a x(t - tau)"},
      {"state_dep_delay", ProblemKind::Autonomous, "state_dep_delay(a=-1,c=1,d=4)",
       "x'(t) = a x(t - c x(t)^2), defined while c x(t)^2 <= d"},
      {"linear_ode", ProblemKind::Autonomous, "linear_ode(a=1)", "x'(t) = a x(t)"},
      {"quadratic", ProblemKind::Autonomous, "quadratic", "x'(t) = x(t)^2"},
      {"constant", ProblemKind::Autonomous, "constant(c=1)", "x'(t) = c"},
      {"pantograph", ProblemKind::Nonautonomous, "pantograph(a=-1,b=0,lambda=0.5)",
       "x'(t) = a x(lambda t) + b x(t)"},
      {"drift", ProblemKind::Nonautonomous, "drift(c=1)", "x'(t) = c"},
      {"cosh", ProblemKind::Vide, "cosh", "x'(t) = int_0^t x(s) ds, x(0) = 1"},
      {"cos", ProblemKind::Vide, "cos", "x'(t) = -int_0^t x(s) ds, x(0) = 1"},
      {"sine", ProblemKind::Vide, "sine", "x'(t) = int_0^t sin(x(s)) ds, x(0) = 1"},
      {"vide", ProblemKind::Vide, "vide(a=1,b=0,x0=1)",
       "x'(t) = int_0^t a e^{b(t-s)} x(s) ds"},
  };
  return infos;
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double to_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

std::vector<double> number_list(const std::string& s, char sep = ',') {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = std::min(s.find(sep, pos), s.size());
    const std::string item = trim(std::string_view(s).substr(pos, next - pos));
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + s + "'");
    out.push_back(to_number(item));
    pos = next + 1;
  }
  return out;
}

void split_spec(const std::string& spec, std::string& name, std::vector<double>& params) {
  const std::string s = trim(spec);
  const auto open = s.find('(');
  if (open == std::string::npos) {
    name = s;
    return;
  }
  if (s.back() != ')') throw std::invalid_argument("malformed problem spec '" + spec + "'");
  name = trim(std::string_view(s).substr(0, open));
  const std::string inner = trim(std::string_view(s).substr(open + 1, s.size() - open - 2));
  if (!inner.empty()) params = number_list(inner);
}

std::vector<double> with_defaults(const std::string& name, std::vector<double> given,
                                  const std::vector<double>& defaults) {
  if (given.size() > defaults.size()) {
    throw std::invalid_argument(name + ": expected at most " + std::to_string(defaults.size()) +
                                " parameters");
  }
  for (std::size_t i = given.size(); i < defaults.size(); ++i) given.push_back(defaults[i]);
  return given;
}

Mat scalar_mat(double x) {
  Mat m(1, 1);
  m(0, 0) = x;
  return m;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

Problem autonomous(std::string name, RhsAutonomous f, std::string history, double horizon) {
  Problem p;
  p.name = std::move(name);
  p.kind = ProblemKind::Autonomous;
  f.name = p.name;
  p.f = std::move(f);
  p.default_history = std::move(history);
  p.default_horizon = horizon;
  return p;
}

Problem vide_problem(VideProblem v, double grid_step, double horizon) {
  Problem p;
  p.name = v.name;
  p.kind = ProblemKind::Vide;
  p.g = make_vide_rhs(v, grid_step);
  p.vide = std::move(v);
  p.default_history = "const:" + format_double(p.vide.x0[0]);
  p.default_horizon = horizon;
  return p;
}

VideProblem scalar_vide(std::string name, std::function<double(double, double)> k,
                        std::function<double(double, double)> kt,
                        std::function<double(double, double)> ks,
                        std::function<double(double)> h, std::function<double(double)> dh,
                        double x0) {
  VideProblem v;
  v.name = std::move(name);
  v.dim = 1;
  v.kernel = [k](double t, double s) { return scalar_mat(k(t, s)); };
  if (kt && ks) {
    v.kernel_dt = [kt](double t, double s) { return scalar_mat(kt(t, s)); };
    v.kernel_ds = [ks](double t, double s) { return scalar_mat(ks(t, s)); };
  }
  v.h = [h](const Vec& x) { return scalar_vec(h(x[0])); };
  if (dh) v.dh = [dh](const Vec& x) { return scalar_mat(dh(x[0])); };
  v.x0 = scalar_vec(x0);
  return v;
}

// x'' = b x' + a x, x(0) = x0, x'(0) = 0.
std::function<Vec(double)> second_order_exact(double a, double b, double x0) {
  using C = std::complex<double>;
  const C disc = std::sqrt(C(b * b + 4.0 * a));
  const C r1 = (b + disc) / 2.0;
  const C r2 = (b - disc) / 2.0;
  if (std::abs(disc) < 1e-12) {
    const double r = b / 2.0;
    return [r, x0](double t) { return scalar_vec(x0 * std::exp(r * t) * (1.0 - r * t)); };
  }
  return [r1, r2, x0](double t) {
    const C v = x0 * (r2 * std::exp(r1 * t) - r1 * std::exp(r2 * t)) / (r2 - r1);
    return scalar_vec(v.real());
  };
}

}  // namespace

Problem make_problem(const std::string& spec, double grid_step) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  std::string name;
  std::vector<double> given;
  split_spec(spec, name, given);

  if (name == "linear_const_delay") {
    const auto p = with_defaults(name, given, {-1.0, 1.0});
    const double a = p[0];
    const double tau = p[1];
    if (!(tau > 0.0)) throw std::invalid_argument("linear_const_delay: tau must be positive");
    RhsAutonomous f;
    f.dim = 1;
    f.delay_horizon = tau;
    f.eval = [a, tau](const History& phi) -> Vec { return a * phi.evaluate(-tau); };
    f.dir_deriv = [a, tau](const History&, const History& chi) -> Vec {
      return a * chi.evaluate(-tau);
    };
    Problem out = autonomous(name, std::move(f), "const:1", 2.0);
    // Method of steps for the constant history 1.
    out.exact = [a, tau](double t) {
      double x = 0.0;
      for (int k = 0; (k - 1) * tau <= t; ++k) {
        x += std::pow(a, k) * std::pow(t - (k - 1) * tau, k) / factorial(k);
      }
      return scalar_vec(t <= 0.0 ? 1.0 : x);
    };
    return out;
  }
  if (name == "state_dep_delay") {
    const auto p = with_defaults(name, given, {-1.0, 1.0, 4.0});
    const double a = p[0];
    const double c = p[1];
    const double d = p[2];
    if (!(c >= 0.0) || !(d > 0.0)) {
      throw std::invalid_argument("state_dep_delay: need c >= 0 and d > 0");
    }
    RhsAutonomous f;
    f.dim = 1;
    f.delay_horizon = d;
    f.eval = [a, c](const History& phi) -> Vec {
      const double x0 = phi.evaluate(0.0)[0];
      return a * phi.evaluate(-c * x0 * x0);
    };
    f.in_domain = [c, d](const History& phi) {
      const double x0 = phi.evaluate(0.0)[0];
      return c * x0 * x0 <= d;
    };
    return autonomous(name, std::move(f), "const:1", 2.0);
  }
  if (name == "linear_ode") {
    const auto p = with_defaults(name, given, {1.0});
    const double a = p[0];
    RhsAutonomous f;
    f.dim = 1;
    f.delay_horizon = 1.0;
    f.eval = [a](const History& phi) -> Vec { return a * phi.evaluate(0.0); };
    f.dir_deriv = [a](const History&, const History& chi) -> Vec {
      return a * chi.evaluate(0.0);
    };
    Problem out = autonomous(name, std::move(f), "const:1", 1.0);
    out.exact = [a](double t) { return scalar_vec(std::exp(a * t)); };
    return out;
  }
  if (name == "quadratic") {
    with_defaults(name, given, {});
    RhsAutonomous f;
    f.dim = 1;
    f.delay_horizon = 1.0;
    f.eval = [](const History& phi) -> Vec {
      const Vec x = phi.evaluate(0.0);
      return x.cwiseProduct(x);
    };
    f.dir_deriv = [](const History& phi, const History& chi) -> Vec {
      return 2.0 * phi.evaluate(0.0).cwiseProduct(chi.evaluate(0.0));
    };
    Problem out = autonomous(name, std::move(f), "const:1", 0.5);
    out.exact = [](double t) { return scalar_vec(1.0 / (1.0 - t)); };
    return out;
  }
  if (name == "constant") {
    const auto p = with_defaults(name, given, {1.0});
    const double c = p[0];
    RhsAutonomous f;
    f.dim = 1;
    f.delay_horizon = 1.0;
    f.eval = [c](const History&) { return scalar_vec(c); };
    f.dir_deriv = [](const History&, const History&) { return scalar_vec(0.0); };
    Problem out = autonomous(name, std::move(f), "const:0", 1.0);
    out.exact = [c](double t) { return scalar_vec(c * t); };
    return out;
  }
  if (name == "pantograph") {
    const auto p = with_defaults(name, given, {-1.0, 0.0, 0.5});
    const double a = p[0];
    const double b = p[1];
    const double lambda = p[2];
    if (!(lambda > 0.0 && lambda < 1.0)) {
      throw std::invalid_argument("pantograph: lambda must lie in (0, 1)");
    }
    Problem out;
    out.name = name;
    out.kind = ProblemKind::Nonautonomous;
    out.g.name = name;
    out.g.dim = 1;
    out.g.delay_horizon = 1.0;
    out.g.growing_delay = true;
    // For t < 0 the lag (lambda - 1) t is positive; the odd prolongation
    // keeps g defined there.
    out.g.eval = [a, b, lambda](double t, const History& phi) -> Vec {
      return a * odd_prolong(phi, (lambda - 1.0) * t) + b * phi.evaluate(0.0);
    };
    out.default_history = "const:1";
    out.default_horizon = 2.0;
    out.exact = [a, b, lambda](double t) {
      double c = 1.0;
      double sum = 0.0;
      double power = 1.0;
      for (int k = 0; k < 60; ++k) {
        sum += c * power;
        c *= (a * std::pow(lambda, k) + b) / (k + 1);
        power *= t;
      }
      return scalar_vec(sum);
    };
    return out;
  }
  if (name == "drift") {
    const auto p = with_defaults(name, given, {1.0});
    const double c = p[0];
    Problem out;
    out.name = name;
    out.kind = ProblemKind::Nonautonomous;
    out.g.name = name;
    out.g.dim = 1;
    out.g.delay_horizon = 1.0;
    out.g.eval = [c](double, const History&) { return scalar_vec(c); };
    out.g.dphi_deriv = [](double, const History&, const History&) { return scalar_vec(0.0); };
    out.g.dt_partial = [](double, const History&) { return scalar_vec(0.0); };
    out.default_history = "const:0";
    out.default_horizon = 1.0;
    out.exact = [c](double t) { return scalar_vec(c * t); };
    return out;
  }
  if (name == "cosh" || name == "cos" || name == "vide") {
    double a = name == "cos" ? -1.0 : 1.0;
    double b = 0.0;
    double x0 = 1.0;
    if (name == "vide") {
      const auto p = with_defaults(name, given, {1.0, 0.0, 1.0});
      a = p[0];
      b = p[1];
      x0 = p[2];
    } else {
      with_defaults(name, given, {});
    }
    auto k = [a, b](double t, double s) { return a * std::exp(b * (t - s)); };
    auto kt = [a, b](double t, double s) { return a * b * std::exp(b * (t - s)); };
    auto ks = [a, b](double t, double s) { return -a * b * std::exp(b * (t - s)); };
    Problem out = vide_problem(
        scalar_vide(name, k, kt, ks, [](double x) { return x; }, [](double) { return 1.0; },
                    x0),
        grid_step, name == "cos" ? std::numbers::pi : 2.0);
    out.exact = second_order_exact(a, b, x0);
    return out;
  }
  if (name == "sine") {
    with_defaults(name, given, {});
    return vide_problem(scalar_vide(
                            name, [](double, double) { return 1.0; },
                            [](double, double) { return 0.0; },
                            [](double, double) { return 0.0; },
                            [](double x) { return std::sin(x); },
                            [](double x) { return std::cos(x); }, 1.0),
                        grid_step, 2.0);
  }
  throw std::invalid_argument("unknown problem '" + name + "'");
}

Problem make_poly_vide(const std::vector<std::vector<double>>& kernel,
                       const std::vector<double>& h, double x0, double grid_step) {
  if (kernel.empty() || h.empty()) {
    throw std::invalid_argument("poly_vide: empty coefficient table");
  }
  auto poly2 = [kernel](double t, double s) {
    double sum = 0.0;
    double ti = 1.0;
    for (const auto& row : kernel) {
      double sj = 1.0;
      for (double c : row) {
        sum += c * ti * sj;
        sj *= s;
      }
      ti *= t;
    }
    return sum;
  };
  auto poly = [h](double x) {
    double sum = 0.0;
    for (auto it = h.rbegin(); it != h.rend(); ++it) sum = sum * x + *it;
    return sum;
  };
  auto dpoly = [h](double x) {
    double sum = 0.0;
    for (std::size_t k = h.size(); k-- > 1;) sum = sum * x + static_cast<double>(k) * h[k];
    return sum;
  };
  return vide_problem(scalar_vide("poly_vide", poly2, {}, {}, poly, dpoly, x0), grid_step, 1.0);
}

HistoryPtr parse_history(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("history spec needs a kind prefix: '" + spec + "'");
  }
  const std::string kind = trim(std::string_view(spec).substr(0, colon));
  const std::string body = trim(std::string_view(spec).substr(colon + 1));
  if (kind == "const") {
    const auto c = number_list(body);
    if (c.size() != 1 && static_cast<int>(c.size()) != dim) {
      throw std::invalid_argument("const history needs 1 or " + std::to_string(dim) + " values");
    }
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = c.size() == 1 ? c[0] : c[k];
    return make_constant_history(v);
  }
  if (kind == "linear") {
    const auto ab = number_list(body);
    if (ab.size() != 2) throw std::invalid_argument("linear history needs a,b");
    const double a = ab[0];
    const double b = ab[1];
    // Two nodes and a matching linear tail represent a + b s exactly.
    const Vec va = Vec::Constant(dim, a - b);
    const Vec vb = Vec::Constant(dim, a);
    const Vec slope = Vec::Constant(dim, b);
    return std::make_shared<HistoryFunction>(
        std::vector<double>{-1.0, 0.0}, std::vector<Vec>{va, vb}, std::vector<Vec>{slope, slope},
        [a, b, dim](double s) { return Vec(Vec::Constant(dim, a + b * s)); });
  }
  if (kind == "samples") {
    auto h = std::make_shared<HistoryFunction>(read_history_csv(body));
    if (h->dim() != dim) throw std::invalid_argument("sampled history has wrong dimension");
    return h;
  }
  throw std::invalid_argument("unknown history kind '" + kind + "'");
}

}  // namespace fdeflow
