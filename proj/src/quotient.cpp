#include "ambiglab/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace ambiglab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRealTol = 1e-8;
constexpr double kLooseRealTol = 1e-5;
constexpr double kClusterTol = 1e-7;

std::vector<std::complex<double>> companion_eigenvalues(const RealVec& coeffs) {
  const Eigen::Index k = coeffs.size() - 1;
  if (k <= 0) return {};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) c(0, j) = -coeffs(j + 1) / coeffs(0);
  for (Eigen::Index i = 1; i < k; ++i) c(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < k; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

double newton_polish(const RealVec& coeffs, double s) {
  for (int it = 0; it < 2; ++it) {
    double p = 0.0, dp = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
      dp = dp * s + p;
      p = p * s + coeffs(i);
    }
    if (dp == 0.0 || !std::isfinite(p / dp)) break;
    const double next = s - p / dp;
    if (!std::isfinite(next)) break;
    s = next;
  }
  return s;
}

std::vector<double> cluster(std::vector<double> roots) {
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back()) <= kClusterTol * (1.0 + std::abs(r))) continue;
    out.push_back(r);
  }
  return out;
}

/// w★ from w and γ. The recursion is run from whichever end keeps the
/// per-step amplification factor (|tan γ| or |cot γ|) at most one.
RealVec recover_w_star(const RealVec& w, double gamma) {
  const Eigen::Index d = w.size();
  const double c = std::cos(gamma), s = std::sin(gamma);
  RealVec ws(d - 1);
  if (std::abs(c) >= std::abs(s)) {
    ws(0) = w(0) / c;
    for (Eigen::Index j = 1; j < d - 1; ++j) ws(j) = (w(j) + s * ws(j - 1)) / c;
  } else {
    ws(d - 2) = -w(d - 1) / s;
    for (Eigen::Index j = d - 2; j >= 1; --j) ws(j - 1) = (c * ws(j) - w(j)) / s;
  }
  return ws;
}

void check_premise(const RealVec& w) {
  require(w.size() >= 2, "decompose: need d >= 2");
  require(w.allFinite(), "decompose: non-finite input");
  require(w(0) != 0.0 && w(w.size() - 1) != 0.0, "decompose: pathological vector (zero endpoint)");
}

void sort_by_angle(std::vector<QuotientElement>& out) {
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.gamma < b.gamma; });
}

}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

double angle_distance(double a, double b) {
  const double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, 2.0 * kPi - d);
}

RealVec reconstruct(const RealVec& w_star, double gamma) {
  require(w_star.size() >= 1, "reconstruct: need d >= 2");
  const Eigen::Index d = w_star.size() + 1;
  RealVec w = RealVec::Zero(d);
  w.head(d - 1) += std::cos(gamma) * w_star;
  w.tail(d - 1) -= std::sin(gamma) * w_star;
  return w;
}

std::vector<double> real_polynomial_roots(const RealVec& coeffs) {
  require(coeffs.size() >= 1 && coeffs(0) != 0.0, "real_polynomial_roots: zero leading coefficient");
  std::vector<double> roots;
  for (const auto& z : companion_eigenvalues(coeffs))
    if (std::abs(z.imag()) <= kRealTol * (1.0 + std::abs(z))) roots.push_back(newton_polish(coeffs, z.real()));
  return cluster(std::move(roots));
}

std::vector<QuotientElement> decompose(const RealVec& w, double tol) {
  check_premise(w);
  const double scale = w.lpNorm<Eigen::Infinity>();

  // Near-real eigenvalues of a (numerically) multiple root may carry a small
  // spurious imaginary part; those are kept only if the residual confirms them.
  std::vector<double> candidates;
  for (const auto& z : companion_eigenvalues(w)) {
    const double im = std::abs(z.imag());
    if (im <= kLooseRealTol * (1.0 + std::abs(z))) candidates.push_back(newton_polish(w, z.real()));
  }
  candidates = cluster(std::move(candidates));

  std::vector<QuotientElement> out;
  for (double s : candidates) {
    const double base = std::atan(s);
    for (double gamma : {base, base + kPi}) {
      gamma = wrap_angle(gamma);
      RealVec ws = recover_w_star(w, gamma);
      if ((reconstruct(ws, gamma) - w).lpNorm<Eigen::Infinity>() <= tol * scale)
        out.push_back({std::move(ws), gamma});
    }
  }
  sort_by_angle(out);
  return out;
}

std::vector<QuotientElement> decompose_oracle(const RealVec& w, int grid_points, double tol) {
  check_premise(w);
  require(grid_points >= 1, "decompose_oracle: grid_points must be >= 1");
  const Eigen::Index d = w.size();
  const double scale = w.lpNorm<Eigen::Infinity>();

  // Terminal residual of the shift recursion run forward (valid while
  // |tan γ| <= 1) or backward (|tan γ| >= 1). Each is continuous on the
  // quarter-turn interval where it is used.
  auto forward = [&](double g) {
    const double c = std::cos(g), s = std::sin(g);
    double ws = w(0) / c;
    for (Eigen::Index j = 1; j < d - 1; ++j) ws = (w(j) + s * ws) / c;
    return w(d - 1) + s * ws;
  };
  auto backward = [&](double g) {
    const double c = std::cos(g), s = std::sin(g);
    double ws = -w(d - 1) / s;
    for (Eigen::Index j = d - 2; j >= 1; --j) ws = (c * ws - w(j)) / s;
    return w(0) - c * ws;
  };
  auto star_at = [&](double g) {
    const double c = std::cos(g), s = std::sin(g);
    RealVec ws(d - 1);
    if (std::abs(c) >= std::abs(s)) {
      ws(0) = w(0) / c;
      for (Eigen::Index j = 1; j < d - 1; ++j) ws(j) = (w(j) + s * ws(j - 1)) / c;
    } else {
      ws(d - 2) = -w(d - 1) / s;
      for (Eigen::Index j = d - 2; j >= 1; --j) ws(j - 1) = (c * ws(j) - w(j)) / s;
    }
    return ws;
  };

  const int per_interval = std::max(2, grid_points / 4);
  std::vector<double> found;
  for (int q = 0; q < 4; ++q) {
    const double lo = -kPi / 4 + q * kPi / 2;
    const double hi = lo + kPi / 2;
    const bool use_forward = (q % 2 == 0);
    auto f = [&](double g) { return use_forward ? forward(g) : backward(g); };

    std::vector<double> grid(per_interval + 1), vals(per_interval + 1);
    for (int i = 0; i <= per_interval; ++i) {
      grid[i] = lo + (hi - lo) * i / per_interval;
      vals[i] = f(grid[i]);
    }
    for (int i = 0; i <= per_interval; ++i) {
      if (vals[i] == 0.0) found.push_back(grid[i]);
      // Tangential zeros show no sign change; catch them as small local minima.
      const bool local_min = (i == 0 || std::abs(vals[i]) <= std::abs(vals[i - 1])) &&
                             (i == per_interval || std::abs(vals[i]) <= std::abs(vals[i + 1]));
      if (local_min && std::abs(vals[i]) <= tol * scale) found.push_back(grid[i]);
      if (i == per_interval || !(vals[i] * vals[i + 1] < 0.0)) continue;
      double a = grid[i], b = grid[i + 1], fa = vals[i];
      for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      found.push_back(0.5 * (a + b));
    }
  }

  for (double& g : found) g = wrap_angle(g);
  std::sort(found.begin(), found.end());
  std::vector<QuotientElement> out;
  for (double g : found) {
    if (!out.empty() && angle_distance(g, out.back().gamma) <= 1e-9) continue;
    if (!out.empty() && angle_distance(g, out.front().gamma) <= 1e-9) continue;
    RealVec ws = star_at(g);
    if ((reconstruct(ws, g) - w).lpNorm<Eigen::Infinity>() <= tol * scale) out.push_back({std::move(ws), g});
  }
  sort_by_angle(out);
  return out;
}

}  // namespace ambiglab
