#pragma once

// Nonautonomous equations x'(t) = g(t, x_t) through the autonomous system
// for (r, x) with r' = 1, r(t0 + u) = t0 + u.

#include "fdeflow/history.hpp"
#include "fdeflow/picard.hpp"
#include "fdeflow/rhs.hpp"
#include "fdeflow/semiflow.hpp"

namespace fdeflow {

/// The scalar history u -> t0 + u.
class ClockHistory final : public History {
 public:
  explicit ClockHistory(double t0) : t0_(t0) {}
  int dim() const override { return 1; }
  Vec evaluate(double s) const override;
  double t0() const { return t0_; }

 private:
  double t0_;
};

/// (clock, phi) as one history of dimension 1 + n.
class StackedHistory final : public History {
 public:
  StackedHistory(HistoryPtr clock, HistoryPtr phi);
  int dim() const override { return 1 + phi_->dim(); }
  Vec evaluate(double s) const override;
  void breakpoints(double lo, std::vector<double>& out) const override;

 private:
  HistoryPtr clock_;
  HistoryPtr phi_;
};

/// p_n: drops the first component. Non-owning.
class ProjectedView final : public History {
 public:
  explicit ProjectedView(const History& psi) : psi_(&psi) {}
  int dim() const override { return psi_->dim() - 1; }
  Vec evaluate(double s) const override { return psi_->evaluate(s).tail(dim()); }
  void breakpoints(double lo, std::vector<double>& out) const override {
    psi_->breakpoints(lo, out);
  }

 private:
  const History* psi_;
};

/// p_n, owning.
class Projected final : public History {
 public:
  explicit Projected(HistoryPtr psi);
  int dim() const override { return psi_->dim() - 1; }
  Vec evaluate(double s) const override { return psi_->evaluate(s).tail(dim()); }
  void breakpoints(double lo, std::vector<double>& out) const override {
    psi_->breakpoints(lo, out);
  }

 private:
  HistoryPtr psi_;
};

/// f_g(psi) = (1, g(psi_1(0), p_n psi)).
RhsAutonomous augment(const RhsNonautonomous& g);

struct ProcessRun {
  double t0 = 0.0;
  SemiflowRun run;  // augmented system, local time u = clock - t0
  HistoryPtr state;  // P(t0 + reached, t0, phi)

  bool ok() const { return run.ok(); }
  double clock_time() const { return t0 + run.reached_time; }
  /// Path without the clock; path(u) = x(t0 + u), base phi.
  Trajectory path() const;
};

/// P(t, t0, phi) = p_n Sigma_g(t - t0, (t0 + .), phi).
ProcessRun process(const RhsNonautonomous& g, double t, double t0, HistoryPtr phi,
                   const SolverConfig& cfg, const SchedulePolicy& policy = {});

/// |P(s, t0, phi) - P(s, t, P(t, t0, phi))|_j.
double check_cocycle(const RhsNonautonomous& g, double s, double t, double t0, HistoryPtr phi,
                     SeminormIndex j, const SolverConfig& cfg);

/// max over nodes |r(u) - (u + t0)| of the clock component.
double clock_defect(const ProcessRun& p);

}  // namespace fdeflow
