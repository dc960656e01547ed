#include "fdeflow/rhs.hpp"

#include <cmath>
#include <sstream>

#include "fdeflow/errors.hpp"
#include "fdeflow/numerics.hpp"

namespace fdeflow {

namespace {

[[noreturn]] void domain_failure(const std::string& name, const History& phi,
                                 const char* what) {
  std::ostringstream msg;
  msg << name << ": " << what << " (phi(0) = [" << phi.evaluate(0.0).transpose() << "])";
  throw DomainError(msg.str());
}

void check_output(const std::string& name, const History& phi, const Vec& v, int dim) {
  if (v.size() != dim) throw InvariantError(name + ": right-hand side has wrong dimension");
  if (!v.allFinite()) domain_failure(name, phi, "non-finite right-hand side");
}

}  // namespace

bool in_domain(const RhsAutonomous& f, const History& phi) {
  return !f.in_domain || f.in_domain(phi);
}

Vec eval_f(const RhsAutonomous& f, const History& phi) {
  if (phi.dim() != f.dim) throw InvariantError(f.name + ": history has wrong dimension");
  if (!in_domain(f, phi)) domain_failure(f.name, phi, "state outside the domain");
  Vec v = f.eval(phi);
  check_output(f.name, phi, v, f.dim);
  return v;
}

Vec eval_df(const RhsAutonomous& f, const History& phi, const History& chi) {
  if (chi.dim() != f.dim) throw InvariantError(f.name + ": direction has wrong dimension");
  if (!in_domain(f, phi)) domain_failure(f.name, phi, "state outside the domain");
  Vec v = f.dir_deriv
              ? f.dir_deriv(phi, chi)
              : fd_directional([&f](const History& x) { return eval_f(f, x); }, phi, chi,
                               default_fd_step(phi));
  check_output(f.name, phi, v, f.dim);
  return v;
}

Vec eval_g(const RhsNonautonomous& g, double t, const History& phi) {
  if (phi.dim() != g.dim) throw InvariantError(g.name + ": history has wrong dimension");
  if (g.in_domain && !g.in_domain(t, phi)) {
    domain_failure(g.name, phi, "state outside the domain");
  }
  Vec v = g.eval(t, phi);
  check_output(g.name, phi, v, g.dim);
  return v;
}

}  // namespace fdeflow
