#pragma once

// Finite representations of the function spaces the solver works in:
//
//   C      = C((-inf,0], R^n)   histories           -> History, HistoryFunction
//   C_T    = C((-inf,T], R^n)   trajectories        -> Trajectory
//   C_0T,0 = paths on [0,T] vanishing at 0         -> ForwardPath (zero_at_origin)
//
// A history is stored as samples on a bounded window [-D,0] plus a tail rule
// for s < -D. Right-hand sides only read a bounded window near each state, so
// the tail is never consulted by a correctly sized problem; it only has to be
// continuous.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "fdeflow/linalg.hpp"

namespace fdeflow {

/// Absolute slack used when a time argument is compared to an interval end.
inline constexpr double kTimeSlack = 1e-11;

/// An element of C((-inf,0], R^n), accessed pointwise.
class History {
 public:
  virtual ~History() = default;

  virtual int dim() const = 0;

  /// Value at s <= 0. Throws DomainError for s > 0.
  virtual Vec evaluate(double s) const = 0;

  /// Appends the sample times of the representation lying in [lo, 0].
  virtual void breakpoints(double lo, std::vector<double>& out) const {
    (void)lo;
    (void)out;
  }
};

using HistoryPtr = std::shared_ptr<const History>;

/// A continuous map (-inf, T] -> R^n, accessed pointwise.
class PathFunction {
 public:
  virtual ~PathFunction() = default;

  virtual int dim() const = 0;
  virtual double horizon() const = 0;

  /// Value at t <= horizon(). Throws DomainError beyond the horizon.
  virtual Vec evaluate(double t) const = 0;

  /// Appends the sample times lying in [lo, hi].
  virtual void breakpoints(double lo, double hi, std::vector<double>& out) const {
    (void)lo;
    (void)hi;
    (void)out;
  }
};

namespace detail {

// Sorted sample times with O(1) lookup on (numerically) uniform grids.
class NodeGrid {
 public:
  NodeGrid() = default;
  explicit NodeGrid(std::vector<double> times);

  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }
  bool uniform() const { return uniform_; }

  // Index i with times[i] <= x <= times[i+1]; x is clamped to the grid.
  std::size_t locate(double x) const;

 private:
  std::vector<double> times_;
  double origin_ = 0.0;
  double step_ = 0.0;
  bool uniform_ = false;
};

// Interpolates flat per-node samples at x inside the grid; cubic Hermite when
// derivative samples are present, linear otherwise. Nodes are reproduced
// exactly.
Vec interpolate(const NodeGrid& grid, std::span<const double> values,
                std::span<const double> derivs, int dim, double x);

}  // namespace detail

enum class TailPolicy { ConstantExtension, UserClosure };

using TailFunction = std::function<Vec(double)>;

/// Sampled history: explicit samples on [-D,0] and a tail rule below -D.
class HistoryFunction final : public History {
 public:
  /// `nodes` strictly increasing with nodes.back() == 0. An empty `tail`
  /// selects ConstantExtension.
  HistoryFunction(std::vector<double> nodes, const std::vector<Vec>& values,
                  const std::vector<Vec>& derivs = {}, TailFunction tail = {});

  static HistoryFunction constant(const Vec& c);

  /// Samples `fn` (and `deriv`, if given) on [-depth, 0] with spacing <= step.
  static HistoryFunction sample(const std::function<Vec(double)>& fn, double depth,
                                double step,
                                const std::function<Vec(double)>& deriv = {},
                                TailFunction tail = {});

  int dim() const override { return dim_; }
  Vec evaluate(double s) const override;
  void breakpoints(double lo, std::vector<double>& out) const override;

  double window_depth() const { return -grid_.front(); }
  TailPolicy tail_policy() const {
    return tail_ ? TailPolicy::UserClosure : TailPolicy::ConstantExtension;
  }
  bool has_derivs() const { return !derivs_.empty(); }
  std::span<const double> nodes() const { return grid_.times(); }
  std::size_t size() const { return grid_.size(); }
  Vec value(std::size_t i) const;
  Vec deriv(std::size_t i) const;

 private:
  int dim_ = 0;
  detail::NodeGrid grid_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  TailFunction tail_;
};

/// Element of C_T: an initial history plus forward samples on [0,T].
class Trajectory final : public PathFunction {
 public:
  /// Forward nodes start at 0 and are strictly increasing; values[0] must
  /// equal base->evaluate(0) exactly.
  Trajectory(HistoryPtr base, std::vector<double> nodes, const std::vector<Vec>& values,
             const std::vector<Vec>& derivs = {});
  /// Flat storage variant: values (and derivs, if any) hold dim() entries per node.
  Trajectory(HistoryPtr base, std::vector<double> nodes, std::vector<double> flat_values,
             std::vector<double> flat_derivs);

  int dim() const override { return dim_; }
  double horizon() const override { return grid_.back(); }
  Vec evaluate(double t) const override;
  void breakpoints(double lo, double hi, std::vector<double>& out) const override;

  const History& base() const { return *base_; }
  const HistoryPtr& base_ptr() const { return base_; }

  std::span<const double> nodes() const { return grid_.times(); }
  std::size_t size() const { return grid_.size(); }
  Vec value(std::size_t i) const;
  Vec deriv(std::size_t i) const;
  bool has_derivs() const { return !derivs_.empty(); }
  std::span<const double> flat_values() const { return values_; }
  std::span<const double> flat_derivs() const { return derivs_; }

 private:
  void validate() const;

  HistoryPtr base_;
  int dim_ = 0;
  detail::NodeGrid grid_;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

using TrajectoryPtr = std::shared_ptr<const Trajectory>;

/// Element of C_0T (or C_0T,0 when zero_at_origin): a path sampled on [0,T].
class ForwardPath {
 public:
  ForwardPath(std::vector<double> nodes, const std::vector<Vec>& values,
              bool zero_at_origin = false, const std::vector<Vec>& derivs = {});
  ForwardPath(int dim, std::vector<double> nodes, std::vector<double> flat_values,
              bool zero_at_origin, std::vector<double> flat_derivs = {});

  static ForwardPath zero(int dim, std::vector<double> nodes);
  static ForwardPath sample(const std::function<Vec(double)>& fn, std::vector<double> nodes,
                            bool zero_at_origin = false);

  int dim() const { return dim_; }
  double horizon() const { return grid_.back(); }
  bool zero_at_origin() const { return zero_at_origin_; }
  std::span<const double> nodes() const { return grid_.times(); }
  std::size_t size() const { return grid_.size(); }
  Vec value(std::size_t i) const;
  Vec deriv(std::size_t i) const;
  bool has_derivs() const { return !derivs_.empty(); }
  std::span<const double> flat_values() const { return values_; }
  std::span<const double> flat_derivs() const { return derivs_; }

  Vec evaluate(double t) const;
  /// max over nodes of the Euclidean norm.
  double sup_norm() const;

 private:
  int dim_ = 0;
  detail::NodeGrid grid_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  bool zero_at_origin_ = false;
};

/// Non-owning segment s -> path(t + s). The path must outlive the view.
class SegmentView final : public History {
 public:
  SegmentView(const PathFunction& path, double t);

  int dim() const override { return path_->dim(); }
  Vec evaluate(double s) const override;
  void breakpoints(double lo, std::vector<double>& out) const override;
  double time() const { return t_; }

 private:
  const PathFunction* path_;
  double t_;
};

/// Owning segment x_t of a trajectory; shares the trajectory instead of copying it.
class Segment final : public History {
 public:
  Segment(TrajectoryPtr x, double t);

  int dim() const override { return x_->dim(); }
  Vec evaluate(double s) const override { return x_->evaluate(t_ + s); }
  void breakpoints(double lo, std::vector<double>& out) const override;

  double time() const { return t_; }
  const TrajectoryPtr& trajectory() const { return x_; }

  /// Copies the samples on [-depth, 0] into a standalone history. Values
  /// below -depth keep delegating to the trajectory.
  HistoryFunction materialize(double depth) const;

 private:
  TrajectoryPtr x_;
  double t_;
};

/// Non-owning pointwise combination a*x + b*y.
class CombinationView final : public History {
 public:
  CombinationView(double a, const History& x, double b, const History& y);

  int dim() const override { return x_->dim(); }
  Vec evaluate(double s) const override;
  void breakpoints(double lo, std::vector<double>& out) const override;

 private:
  double a_;
  const History* x_;
  double b_;
  const History* y_;
};

/// Owning linear combination sum_k c_k * phi_k.
class LinearCombination final : public History {
 public:
  explicit LinearCombination(std::vector<std::pair<double, HistoryPtr>> terms);

  int dim() const override { return terms_.front().second->dim(); }
  Vec evaluate(double s) const override;
  void breakpoints(double lo, std::vector<double>& out) const override;

 private:
  std::vector<std::pair<double, HistoryPtr>> terms_;
};

/// Window length j >= 1 of the seminorm |phi|_{T,j} = max_{T-j<=t<=T} |phi(t)|.
class SeminormIndex {
 public:
  explicit SeminormIndex(int j);
  int value() const { return j_; }

 private:
  int j_;
};

/// Oversampling factor between stored nodes when a supremum is approximated.
inline constexpr int kSeminormOversampling = 4;

double seminorm(const History& phi, SeminormIndex j);
double seminorm(const Trajectory& x, SeminormIndex j);
/// |a - b|_j for two histories.
double seminorm_distance(const History& a, const History& b, SeminormIndex j);

/// x_t for 0 <= t <= T.
Segment segment(const TrajectoryPtr& x, double t);

/// P_0T: phi on (-inf,0], phi(0) on [0,T].
Trajectory prolong_const(HistoryPtr phi, double T);

/// Z_T: 0 on (-inf,0], eta on [0,T]. Requires eta.zero_at_origin().
Trajectory zero_extend(const ForwardPath& eta);

/// J_T(eta, phi) = P_0T phi + Z_T eta. Requires eta.zero_at_origin().
Trajectory concat(const ForwardPath& eta, HistoryPtr phi);

/// Odd prolongation: phi(s) for s <= 0 and 2 phi(0) - phi(-s) for s > 0.
Vec odd_prolong(const History& phi, double s);

HistoryPtr make_constant_history(const Vec& c);

}  // namespace fdeflow
