#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "ambiglab/convolution.hpp"
#include "ambiglab/rng.hpp"

namespace testsupport {

using ambiglab::RealMat;
using ambiglab::RealVec;

inline constexpr double kPi = std::numbers::pi;

inline RealVec gaussian(ambiglab::Rng& rng, int d) {
  RealVec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.normal();
  return v;
}

inline double max_abs(const RealVec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

/// (m+n-1) x n Toeplitz matrix T with T y = x * y, built entry by entry.
inline RealMat toeplitz_oracle(const RealVec& x, int n) {
  const int m = static_cast<int>(x.size());
  RealMat t = RealMat::Zero(m + n - 1, n);
  for (int r = 0; r < m + n - 1; ++r)
    for (int c = 0; c < n; ++c)
      if (r - c >= 0 && r - c < m) t(r, c) = x(r - c);
  return t;
}

/// Evaluates sum_i c(i) s^(k-i) by summing powers directly.
inline double poly_eval(const RealVec& c, double s) {
  double acc = 0.0;
  const int k = static_cast<int>(c.size()) - 1;
  for (int i = 0; i <= k; ++i) acc += c(i) * std::pow(s, k - i);
  return acc;
}

}  // namespace testsupport
