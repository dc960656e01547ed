#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "fdeflow/history.hpp"
#include "fdeflow/linalg.hpp"

namespace fdeflow {

enum class QuadratureKind { Trapezoid, Simpson };

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::Trapezoid;
  int panels_per_unit = 1000;

  void validate() const;
};

struct Tolerance {
  double atol = 1e-13;
  double rtol = 1e-13;
  int max_iters = 200;

  void validate() const;
  double threshold(double scale) const { return atol + rtol * scale; }
};

/// Signed integral of samples g[i] taken at times t[i] (monotone, either
/// orientation). Simpson needs uniform spacing and an even panel count.
Vec integrate(std::span<const double> t, std::span<const Vec> g, QuadratureKind kind);

/// Signed integral of g over [a,b] with ceil(|b-a| * panels_per_unit) panels
/// (rounded up to even for Simpson).
Vec integrate(const std::function<Vec(double)>& g, double a, double b,
              const QuadratureRule& rule);

/// Cumulative integral at every node of flat samples (dim entries per node).
/// out[0] = 0. Simpson runs on uniform nodes only: composite Simpson at even
/// nodes, the 3/8 rule over the last three panels at odd ones.
void cumulative_integral(std::span<const double> t, std::span<const double> f, int dim,
                         QuadratureKind kind, std::span<double> out);

using HistoryMap = std::function<Vec(const History&)>;

/// (F(phi + h chi) - F(phi - h chi)) / 2h.
Vec fd_directional(const HistoryMap& F, const History& phi, const History& chi, double h);

/// cbrt(machine epsilon) * (1 + |phi(0)|_inf).
double default_fd_step(const History& phi);

}  // namespace fdeflow
