#include "fdeflow/history.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fdeflow/errors.hpp"

namespace fdeflow {

namespace {

std::vector<double> flatten(const std::vector<Vec>& vs, int dim, const char* what) {
  std::vector<double> out;
  out.reserve(vs.size() * static_cast<std::size_t>(dim));
  for (const auto& v : vs) {
    if (v.size() != dim) {
      throw InvariantError(std::string(what) + ": inconsistent vector dimension");
    }
    for (int k = 0; k < dim; ++k) out.push_back(v[k]);
  }
  return out;
}

void check_finite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw InvariantError(std::string(what) + ": non-finite sample");
  }
}

void check_increasing(std::span<const double> t, const char* what) {
  if (t.empty()) throw InvariantError(std::string(what) + ": no nodes");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      throw InvariantError(std::string(what) + ": nodes must be strictly increasing");
    }
  }
  check_finite(t, what);
}

Vec read_flat(std::span<const double> flat, int dim, std::size_t i) {
  Vec v(dim);
  for (int k = 0; k < dim; ++k) v[k] = flat[i * dim + k];
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// NodeGrid / interpolation

namespace detail {

NodeGrid::NodeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() >= 2) {
    origin_ = times_.front();
    step_ = (times_.back() - times_.front()) / static_cast<double>(times_.size() - 1);
    uniform_ = true;
    for (std::size_t i = 0; i < times_.size(); ++i) {
      if (std::abs(times_[i] - (origin_ + static_cast<double>(i) * step_)) > 1e-9 * step_) {
        uniform_ = false;
        break;
      }
    }
  }
}

std::size_t NodeGrid::locate(double x) const {
  const std::size_t last = times_.size() - 1;
  if (last == 0) return 0;
  if (x <= times_.front()) return 0;
  if (x >= times_.back()) return last - 1;
  std::size_t i;
  if (uniform_) {
    const double r = std::floor((x - origin_) / step_);
    i = r <= 0.0 ? 0 : std::min(static_cast<std::size_t>(r), last - 1);
    while (i > 0 && x < times_[i]) --i;
    while (i + 1 < last && x > times_[i + 1]) ++i;
  } else {
    auto it = std::upper_bound(times_.begin(), times_.end(), x);
    i = static_cast<std::size_t>(it - times_.begin()) - 1;
    i = std::min(i, last - 1);
  }
  return i;
}

Vec interpolate(const NodeGrid& grid, std::span<const double> values,
                std::span<const double> derivs, int dim, double x) {
  const auto t = grid.times();
  if (t.size() == 1) return read_flat(values, dim, 0);
  const std::size_t i = grid.locate(x);
  if (x == t[i]) return read_flat(values, dim, i);
  if (x == t[i + 1]) return read_flat(values, dim, i + 1);

  const double h = t[i + 1] - t[i];
  const double th = (x - t[i]) / h;
  const double* y0 = values.data() + i * dim;
  const double* y1 = y0 + dim;
  Vec out(dim);
  if (derivs.empty()) {
    for (int k = 0; k < dim; ++k) out[k] = y0[k] + th * (y1[k] - y0[k]);
    return out;
  }
  const double* d0 = derivs.data() + i * dim;
  const double* d1 = d0 + dim;
  const double om = 1.0 - th;
  const double h10 = th * om * om;
  const double h01 = th * th * (3.0 - 2.0 * th);
  const double h11 = th * th * (th - 1.0);
  for (int k = 0; k < dim; ++k) {
    // h00 = 1 - h01; this form reproduces constants exactly.
    out[k] = y0[k] + h01 * (y1[k] - y0[k]) + h * (h10 * d0[k] + h11 * d1[k]);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// HistoryFunction

HistoryFunction::HistoryFunction(std::vector<double> nodes, const std::vector<Vec>& values,
                                 const std::vector<Vec>& derivs, TailFunction tail)
    : tail_(std::move(tail)) {
  check_increasing(nodes, "HistoryFunction");
  if (nodes.back() != 0.0) throw InvariantError("HistoryFunction: last node must be 0");
  if (values.size() != nodes.size()) {
    throw InvariantError("HistoryFunction: one value per node required");
  }
  dim_ = static_cast<int>(values.front().size());
  if (dim_ < 1 || dim_ > kMaxDim) throw InvariantError("HistoryFunction: bad dimension");
  values_ = flatten(values, dim_, "HistoryFunction");
  check_finite(values_, "HistoryFunction");
  if (!derivs.empty()) {
    if (derivs.size() != nodes.size()) {
      throw InvariantError("HistoryFunction: one derivative per node required");
    }
    derivs_ = flatten(derivs, dim_, "HistoryFunction");
    check_finite(derivs_, "HistoryFunction");
  }
  grid_ = detail::NodeGrid(std::move(nodes));
}

HistoryFunction HistoryFunction::constant(const Vec& c) {
  return HistoryFunction({0.0}, {c}, {Vec::Zero(c.size())});
}

HistoryFunction HistoryFunction::sample(const std::function<Vec(double)>& fn, double depth,
                                        double step, const std::function<Vec(double)>& deriv,
                                        TailFunction tail) {
  if (!(depth >= 0.0) || !(step > 0.0)) {
    throw InvariantError("HistoryFunction::sample: need depth >= 0 and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::ceil(depth / step - 1e-9));
  std::vector<double> nodes;
  std::vector<Vec> values;
  std::vector<Vec> derivs;
  const double h = count == 0 ? 0.0 : depth / static_cast<double>(count);
  for (std::size_t k = 0; k <= count; ++k) {
    const double s = (k == count) ? 0.0 : -static_cast<double>(count - k) * h;
    nodes.push_back(s);
    values.push_back(fn(s));
    if (deriv) derivs.push_back(deriv(s));
  }
  return HistoryFunction(std::move(nodes), values, derivs, std::move(tail));
}

Vec HistoryFunction::evaluate(double s) const {
  if (s > kTimeSlack) {
    throw DomainError("history evaluated at s = " + std::to_string(s) + " > 0", s);
  }
  if (s > 0.0) s = 0.0;
  if (s < grid_.front()) {
    if (tail_) return tail_(s);
    return read_flat(values_, dim_, 0);
  }
  return detail::interpolate(grid_, values_, derivs_, dim_, s);
}

void HistoryFunction::breakpoints(double lo, std::vector<double>& out) const {
  for (double t : grid_.times()) {
    if (t >= lo) out.push_back(t);
  }
}

Vec HistoryFunction::value(std::size_t i) const { return read_flat(values_, dim_, i); }

Vec HistoryFunction::deriv(std::size_t i) const {
  if (derivs_.empty()) return Vec::Zero(dim_);
  return read_flat(derivs_, dim_, i);
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory::Trajectory(HistoryPtr base, std::vector<double> nodes,
                       const std::vector<Vec>& values, const std::vector<Vec>& derivs)
    : base_(std::move(base)) {
  if (!base_) throw InvariantError("Trajectory: null base history");
  dim_ = base_->dim();
  values_ = flatten(values, dim_, "Trajectory");
  if (!derivs.empty()) derivs_ = flatten(derivs, dim_, "Trajectory");
  grid_ = detail::NodeGrid(std::move(nodes));
  validate();
}

Trajectory::Trajectory(HistoryPtr base, std::vector<double> nodes,
                       std::vector<double> flat_values, std::vector<double> flat_derivs)
    : base_(std::move(base)), values_(std::move(flat_values)), derivs_(std::move(flat_derivs)) {
  if (!base_) throw InvariantError("Trajectory: null base history");
  dim_ = base_->dim();
  grid_ = detail::NodeGrid(std::move(nodes));
  validate();
}

void Trajectory::validate() const {
  const auto t = grid_.times();
  check_increasing(t, "Trajectory");
  if (t.front() != 0.0) throw InvariantError("Trajectory: forward nodes must start at 0");
  if (values_.size() != t.size() * static_cast<std::size_t>(dim_)) {
    throw InvariantError("Trajectory: one value per node required");
  }
  if (!derivs_.empty() && derivs_.size() != values_.size()) {
    throw InvariantError("Trajectory: one derivative per node required");
  }
  check_finite(values_, "Trajectory");
  check_finite(derivs_, "Trajectory");
  const Vec at0 = base_->evaluate(0.0);
  for (int k = 0; k < dim_; ++k) {
    if (values_[k] != at0[k]) {
      throw InvariantError("Trajectory: value at t = 0 must equal the initial history at 0");
    }
  }
}

Vec Trajectory::evaluate(double t) const {
  const double T = grid_.back();
  if (t > T + kTimeSlack) {
    throw DomainError("trajectory evaluated at t = " + std::to_string(t) +
                          " beyond horizon " + std::to_string(T),
                      t);
  }
  if (t < 0.0) return base_->evaluate(t);
  return detail::interpolate(grid_, values_, derivs_, dim_, std::min(t, T));
}

void Trajectory::breakpoints(double lo, double hi, std::vector<double>& out) const {
  if (lo < 0.0) {
    std::vector<double> b;
    base_->breakpoints(lo, b);
    for (double s : b) {
      if (s <= hi && s < 0.0) out.push_back(s);
    }
  }
  for (double t : grid_.times()) {
    if (t >= lo && t <= hi) out.push_back(t);
  }
}

Vec Trajectory::value(std::size_t i) const { return read_flat(values_, dim_, i); }

Vec Trajectory::deriv(std::size_t i) const {
  if (derivs_.empty()) return Vec::Zero(dim_);
  return read_flat(derivs_, dim_, i);
}

// ---------------------------------------------------------------------------
// ForwardPath

ForwardPath::ForwardPath(std::vector<double> nodes, const std::vector<Vec>& values,
                         bool zero_at_origin, const std::vector<Vec>& derivs)
    : zero_at_origin_(zero_at_origin) {
  if (values.empty()) throw InvariantError("ForwardPath: no values");
  dim_ = static_cast<int>(values.front().size());
  *this = ForwardPath(dim_, std::move(nodes), flatten(values, dim_, "ForwardPath"),
                      zero_at_origin,
                      derivs.empty() ? std::vector<double>{}
                                     : flatten(derivs, dim_, "ForwardPath"));
}

ForwardPath::ForwardPath(int dim, std::vector<double> nodes, std::vector<double> flat_values,
                         bool zero_at_origin, std::vector<double> flat_derivs)
    : dim_(dim),
      values_(std::move(flat_values)),
      derivs_(std::move(flat_derivs)),
      zero_at_origin_(zero_at_origin) {
  check_increasing(nodes, "ForwardPath");
  if (nodes.size() < 2) throw InvariantError("ForwardPath: need a positive horizon");
  if (nodes.front() != 0.0) throw InvariantError("ForwardPath: nodes must start at 0");
  if (dim_ < 1 || dim_ > kMaxDim) throw InvariantError("ForwardPath: bad dimension");
  if (values_.size() != nodes.size() * static_cast<std::size_t>(dim_)) {
    throw InvariantError("ForwardPath: one value per node required");
  }
  if (!derivs_.empty() && derivs_.size() != values_.size()) {
    throw InvariantError("ForwardPath: one derivative per node required");
  }
  check_finite(values_, "ForwardPath");
  check_finite(derivs_, "ForwardPath");
  if (zero_at_origin_) {
    for (int k = 0; k < dim_; ++k) {
      if (values_[k] != 0.0) {
        throw InvariantError("ForwardPath: zero_at_origin path must vanish at t = 0");
      }
    }
  }
  grid_ = detail::NodeGrid(std::move(nodes));
}

ForwardPath ForwardPath::zero(int dim, std::vector<double> nodes) {
  std::vector<double> v(nodes.size() * static_cast<std::size_t>(dim), 0.0);
  std::vector<double> d = v;
  return ForwardPath(dim, std::move(nodes), std::move(v), true, std::move(d));
}

ForwardPath ForwardPath::sample(const std::function<Vec(double)>& fn, std::vector<double> nodes,
                                bool zero_at_origin) {
  std::vector<Vec> values;
  values.reserve(nodes.size());
  for (double t : nodes) values.push_back(fn(t));
  return ForwardPath(std::move(nodes), values, zero_at_origin);
}

Vec ForwardPath::value(std::size_t i) const { return read_flat(values_, dim_, i); }

Vec ForwardPath::deriv(std::size_t i) const {
  if (derivs_.empty()) return Vec::Zero(dim_);
  return read_flat(derivs_, dim_, i);
}

Vec ForwardPath::evaluate(double t) const {
  if (t < -kTimeSlack || t > horizon() + kTimeSlack) {
    throw DomainError("forward path evaluated outside [0, T]", t);
  }
  return detail::interpolate(grid_, values_, derivs_, dim_, std::clamp(t, 0.0, horizon()));
}

double ForwardPath::sup_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += values_[i * dim_ + k] * values_[i * dim_ + k];
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Views

SegmentView::SegmentView(const PathFunction& path, double t) : path_(&path), t_(t) {}

Vec SegmentView::evaluate(double s) const {
  if (s > kTimeSlack) throw DomainError("segment evaluated at s > 0", s);
  return path_->evaluate(t_ + std::min(s, 0.0));
}

void SegmentView::breakpoints(double lo, std::vector<double>& out) const {
  std::vector<double> b;
  path_->breakpoints(t_ + lo, t_, b);
  for (double u : b) out.push_back(std::min(u - t_, 0.0));
}

Segment::Segment(TrajectoryPtr x, double t) : x_(std::move(x)), t_(t) {
  if (!x_) throw InvariantError("Segment: null trajectory");
  if (t < -kTimeSlack || t > x_->horizon() + kTimeSlack) {
    throw DomainError("segment time outside [0, T]", t);
  }
  t_ = std::clamp(t, 0.0, x_->horizon());
}

void Segment::breakpoints(double lo, std::vector<double>& out) const {
  SegmentView(*x_, t_).breakpoints(lo, out);
}

HistoryFunction Segment::materialize(double depth) const {
  std::vector<double> s;
  breakpoints(-depth, s);
  s.push_back(-depth);
  s.push_back(0.0);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end(),
                      [](double a, double b) { return std::abs(a - b) <= 1e-14; }),
          s.end());
  s.back() = 0.0;
  std::vector<Vec> values;
  values.reserve(s.size());
  for (double u : s) values.push_back(evaluate(u));
  const TrajectoryPtr keep = x_;
  const double t = t_;
  return HistoryFunction(std::move(s), values, {},
                         [keep, t](double u) { return keep->evaluate(t + u); });
}

CombinationView::CombinationView(double a, const History& x, double b, const History& y)
    : a_(a), x_(&x), b_(b), y_(&y) {
  if (x.dim() != y.dim()) throw InvariantError("CombinationView: dimension mismatch");
}

Vec CombinationView::evaluate(double s) const {
  return a_ * x_->evaluate(s) + b_ * y_->evaluate(s);
}

void CombinationView::breakpoints(double lo, std::vector<double>& out) const {
  x_->breakpoints(lo, out);
  y_->breakpoints(lo, out);
}

LinearCombination::LinearCombination(std::vector<std::pair<double, HistoryPtr>> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw InvariantError("LinearCombination: no terms");
  for (const auto& [c, h] : terms_) {
    if (!h || h->dim() != terms_.front().second->dim()) {
      throw InvariantError("LinearCombination: dimension mismatch");
    }
  }
}

Vec LinearCombination::evaluate(double s) const {
  Vec out = Vec::Zero(dim());
  for (const auto& [c, h] : terms_) out += c * h->evaluate(s);
  return out;
}

void LinearCombination::breakpoints(double lo, std::vector<double>& out) const {
  for (const auto& term : terms_) term.second->breakpoints(lo, out);
}

// ---------------------------------------------------------------------------
// Seminorms

SeminormIndex::SeminormIndex(int j) : j_(j) {
  if (j < 1) throw InvariantError("SeminormIndex: j must be >= 1");
}

double seminorm(const History& phi, SeminormIndex j) {
  const double lo = -static_cast<double>(j.value());
  std::vector<double> pts;
  phi.breakpoints(lo, pts);
  pts.push_back(lo);
  pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Long stretches without samples (tails, closures) get a floor resolution.
  const double max_gap = (0.0 - lo) / 64.0;
  double best = 0.0;
  auto visit = [&](double s) { best = std::max(best, phi.evaluate(std::min(s, 0.0)).norm()); };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    const int pieces =
        kSeminormOversampling * std::max(1, static_cast<int>(std::ceil((b - a) / max_gap)));
    for (int k = 0; k < pieces; ++k) visit(a + (b - a) * k / pieces);
  }
  visit(pts.back());
  return best;
}

double seminorm(const Trajectory& x, SeminormIndex j) {
  return seminorm(SegmentView(x, x.horizon()), j);
}

double seminorm_distance(const History& a, const History& b, SeminormIndex j) {
  return seminorm(CombinationView(1.0, a, -1.0, b), j);
}

// ---------------------------------------------------------------------------
// Operators between the spaces

Segment segment(const TrajectoryPtr& x, double t) { return Segment(x, t); }

Trajectory prolong_const(HistoryPtr phi, double T) {
  if (!(T > 0.0)) throw InvariantError("prolong_const: T must be positive");
  const Vec c = phi->evaluate(0.0);
  const Vec z = Vec::Zero(c.size());
  return Trajectory(std::move(phi), {0.0, T}, {c, c}, {z, z});
}

Trajectory zero_extend(const ForwardPath& eta) {
  if (!eta.zero_at_origin()) {
    throw InvariantError("zero_extend: path is not an element of C_0T,0");
  }
  auto zero = make_constant_history(Vec::Zero(eta.dim()));
  const auto nodes = eta.nodes();
  return Trajectory(std::move(zero), std::vector<double>(nodes.begin(), nodes.end()),
                    std::vector<double>(eta.flat_values().begin(), eta.flat_values().end()),
                    std::vector<double>(eta.flat_derivs().begin(), eta.flat_derivs().end()));
}

Trajectory concat(const ForwardPath& eta, HistoryPtr phi) {
  if (!eta.zero_at_origin()) {
    throw InvariantError("concat: path is not an element of C_0T,0");
  }
  if (phi->dim() != eta.dim()) throw InvariantError("concat: dimension mismatch");
  const Vec p0 = phi->evaluate(0.0);
  const int n = eta.dim();
  std::vector<double> values(eta.flat_values().begin(), eta.flat_values().end());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    for (int k = 0; k < n; ++k) values[i * n + k] += p0[k];
  }
  const auto nodes = eta.nodes();
  return Trajectory(std::move(phi), std::vector<double>(nodes.begin(), nodes.end()),
                    std::move(values),
                    std::vector<double>(eta.flat_derivs().begin(), eta.flat_derivs().end()));
}

Vec odd_prolong(const History& phi, double s) {
  if (s <= 0.0) return phi.evaluate(s);
  return 2.0 * phi.evaluate(0.0) - phi.evaluate(-s);
}

HistoryPtr make_constant_history(const Vec& c) {
  return std::make_shared<HistoryFunction>(HistoryFunction::constant(c));
}

}  // namespace fdeflow
