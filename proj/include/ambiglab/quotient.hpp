#pragma once

// Shift-rotation decompositions w = cos(γ)(w★;0) - sin(γ)(0;w★).
//
// With P(s) = sum_i w(i) s^(d-i) and P★ built the same way from w★, this
// reads P(s) = P★(s)(s cos γ - sin γ), so valid angles are the real roots
// s = tan γ of P. Each real root yields
// the two angles arctan(s) and arctan(s) + π (w★ flips sign), hence at most
// 2(d-1) elements, and at least two when d is even.

#include <vector>

#include "ambiglab/convolution.hpp"

namespace ambiglab {

inline constexpr double kDefaultQuotientTol = 1e-9;

struct QuotientElement {
  RealVec w_star;  // length d-1
  double gamma = 0.0;  // in [0, 2π)
};

RealVec reconstruct(const RealVec& w_star, double gamma);

/// Root-based decomposition. Requires w(1) != 0 and w(d) != 0. Elements are
/// sorted by angle; each has ||reconstruct - w||_inf <= tol ||w||_inf.
std::vector<QuotientElement> decompose(const RealVec& w, double tol = kDefaultQuotientTol);

/// Brute-force cross-check: sweeps γ on a uniform grid, runs the shift
/// recursion directly and bisects sign changes of its terminal residual.
/// Fewer than 8 grid points is allowed but can miss elements.
std::vector<QuotientElement> decompose_oracle(const RealVec& w, int grid_points = 1 << 16,
                                              double tol = kDefaultQuotientTol);

/// Real roots (sorted, clustered) of sum_i coeffs(i) s^(k-i), coeffs(0) != 0.
std::vector<double> real_polynomial_roots(const RealVec& coeffs);

/// Angle wrapped into [0, 2π).
double wrap_angle(double a);

/// |a - b| measured on the circle.
double angle_distance(double a, double b);

}  // namespace ambiglab
