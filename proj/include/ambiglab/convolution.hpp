#pragma once

// Linear convolution, the lifted (anti-diagonal sum) operator, relay delay
// matrices and the rank-two null-space construction.
//
// All indices in the public API are 1-based where they name signal positions
// (delays, index sets); storage is ordinary 0-based Eigen.
//
// The templated forms work for any Eigen scalar, so the integer paper
// examples and the null-matrix identity can be checked in exact arithmetic.

#include <cstdint>

#include <Eigen/Core>

#include "ambiglab/errors.hpp"

namespace ambiglab {

using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;
using IntVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kDefaultRankTol = 1e-9;

template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// z(l) = sum_j x(j) y(l+1-j), direct O(mn) summation.
template <typename T>
Vec<T> convolve(const Vec<T>& x, const Vec<T>& y) {
  require(x.size() >= 1 && y.size() >= 1, "convolve: empty input");
  const Eigen::Index m = x.size();
  const Eigen::Index n = y.size();
  Vec<T> z = Vec<T>::Zero(m + n - 1);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i + j) += x(i) * y(j);
  return z;
}

/// Anti-diagonal sums of W; lift_apply(x y^T) == convolve(x, y).
template <typename T>
Vec<T> lift_apply(const Mat<T>& w) {
  require(w.rows() >= 1 && w.cols() >= 1, "lift_apply: empty matrix");
  Vec<T> z = Vec<T>::Zero(w.rows() + w.cols() - 1);
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) z(i + j) += w(i, j);
  return z;
}

/// Q = (u;0)(0,v^T) - (0;u)(v^T,0), an m x n matrix in the rank-2 null
/// space of the lifted operator (m = |u|+1, n = |v|+1).
template <typename T>
Mat<T> rank2_null_matrix(const Vec<T>& u, const Vec<T>& v) {
  require(u.size() >= 1 && v.size() >= 1, "rank2_null_matrix: need m,n >= 2");
  const Eigen::Index m = u.size() + 1;
  const Eigen::Index n = v.size() + 1;
  Vec<T> u_last = Vec<T>::Zero(m), u_first = Vec<T>::Zero(m);
  Vec<T> v_last = Vec<T>::Zero(n), v_first = Vec<T>::Zero(n);
  u_last.head(m - 1) = u;
  u_first.tail(m - 1) = u;
  v_last.head(n - 1) = v;
  v_first.tail(n - 1) = v;
  return u_last * v_first.transpose() - u_first * v_last.transpose();
}

/// 0/1 Toeplitz delay matrix D^{-l} of size (m+n-1) x n: column i maps to
/// row i+l-1 (1-based), i.e. the input is shifted down by l-1 samples.
RealMat delay_matrix(int l, int n, int m);

/// sum over nonzero g(j) of g(j) D^{-j} h; equals convolve(g, h).
RealVec channel_superposition(const RealVec& g, const RealVec& h);

RealVec convolve(const RealVec& x, const RealVec& y);
RealVec lift_apply(const RealMat& w);
RealMat rank2_null_matrix(const RealVec& u, const RealVec& v);

/// Singular values above tol * sigma_max. The zero matrix has rank 0.
int numerical_rank(const RealMat& w, double tol = kDefaultRankTol);

/// rank(W) <= k and ||S(W)||_inf <= tol.
bool in_nullspace(const RealMat& w, int k, double tol = kDefaultRankTol);

RealMat outer(const RealVec& x, const RealVec& y);

}  // namespace ambiglab
