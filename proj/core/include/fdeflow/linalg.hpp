#pragma once

#include <Eigen/Core>

namespace fdeflow {

/// Largest state dimension supported (clock-augmented problems count the clock).
inline constexpr int kMaxDim = 16;

// Bounded dynamic storage keeps small vectors off the heap in the inner loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim, kMaxDim>;

inline Vec zeros(int n) { return Vec::Zero(n); }

inline Vec constant_vec(int n, double c) { return Vec::Constant(n, c); }

inline Vec scalar_vec(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

}  // namespace fdeflow
