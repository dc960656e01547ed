#pragma once

// Named built-in problems, addressed as "name" or "name(p1,p2,...)".

#include <functional>
#include <string>
#include <vector>

#include "fdeflow/history.hpp"
#include "fdeflow/rhs.hpp"
#include "fdeflow/vide.hpp"

namespace fdeflow {

enum class ProblemKind { Autonomous, Nonautonomous, Vide };

struct Problem {
  std::string name;
  ProblemKind kind = ProblemKind::Autonomous;
  RhsAutonomous f;     // Autonomous
  RhsNonautonomous g;  // Nonautonomous and Vide
  VideProblem vide;    // Vide
  std::string default_history;
  double default_horizon = 1.0;
  /// Closed-form solution for the default history and t0 = 0, if known.
  std::function<Vec(double)> exact;

  int dim() const;
};

struct ProblemInfo {
  std::string name;
  ProblemKind kind;
  std::string signature;
  std::string summary;
};

const std::vector<ProblemInfo>& registry();

/// Builds a registry problem; unknown names and bad parameters throw
/// std::invalid_argument. `grid_step` sets the inner quadrature of VIDEs.
Problem make_problem(const std::string& spec, double grid_step);

/// Scalar VIDE with k(t,s) = sum c[i][j] t^i s^j and h(x) = sum a[k] x^k.
Problem make_poly_vide(const std::vector<std::vector<double>>& kernel,
                       const std::vector<double>& h, double x0, double grid_step);

/// "const:c1[,c2..]", "linear:a,b" (a + b s), "samples:path.csv".
/// A single constant is broadcast to `dim` components.
HistoryPtr parse_history(const std::string& spec, int dim);

const char* to_string(ProblemKind k);

}  // namespace fdeflow
