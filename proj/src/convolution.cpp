#include "ambiglab/convolution.hpp"

#include <Eigen/SVD>

namespace ambiglab {

RealVec convolve(const RealVec& x, const RealVec& y) { return convolve<double>(x, y); }

RealVec lift_apply(const RealMat& w) { return lift_apply<double>(w); }

RealMat rank2_null_matrix(const RealVec& u, const RealVec& v) { return rank2_null_matrix<double>(u, v); }

RealMat delay_matrix(int l, int n, int m) {
  require(m >= 1 && n >= 1, "delay_matrix: m,n must be >= 1");
  require(l >= 1 && l <= m, "delay_matrix: delay out of range [1, m]");
  RealMat d = RealMat::Zero(m + n - 1, n);
  for (int i = 0; i < n; ++i) d(i + l - 1, i) = 1.0;
  return d;
}

RealVec channel_superposition(const RealVec& g, const RealVec& h) {
  require(g.size() >= 1 && h.size() >= 1, "channel_superposition: empty input");
  const int m = static_cast<int>(g.size());
  const int n = static_cast<int>(h.size());
  RealVec z = RealVec::Zero(m + n - 1);
  for (int j = 1; j <= m; ++j) {
    if (g(j - 1) == 0.0) continue;
    z += g(j - 1) * (delay_matrix(j, n, m) * h);
  }
  return z;
}

int numerical_rank(const RealMat& w, double tol) {
  if (w.size() == 0) return 0;
  Eigen::JacobiSVD<RealMat> svd(w);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++rank;
  return rank;
}

bool in_nullspace(const RealMat& w, int k, double tol) {
  require(k >= 0, "in_nullspace: k must be >= 0");
  require(tol > 0.0, "in_nullspace: tol must be > 0");
  if (numerical_rank(w, tol) > k) return false;
  return lift_apply(w).lpNorm<Eigen::Infinity>() <= tol;
}

RealMat outer(const RealVec& x, const RealVec& y) { return x * y.transpose(); }

}  // namespace ambiglab
