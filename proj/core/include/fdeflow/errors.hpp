#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdeflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the domain of a function (history argument s > 0,
/// trajectory time beyond its horizon, or a state outside the RHS domain U).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, double time = std::nan(""))
      : Error(what), time_(time) {}

  /// Time at which the violation was detected; NaN when not time-related.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A structural invariant of a value type was violated on construction.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Quadrature samples do not line up with the requested panels.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// No admissible step length above the configured minimum exists.
class StepSelectionError : public Error {
 public:
  StepSelectionError(const std::string& what, double last_step)
      : Error(what), last_step_(last_step) {}
  double last_step() const noexcept { return last_step_; }

 private:
  double last_step_;
};

/// The fixed-point iteration hit its iteration cap.
class NonconvergenceError : public Error {
 public:
  NonconvergenceError(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// A computed run does not cover the requested time.
class HorizonError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdeflow
