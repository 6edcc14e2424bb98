#include <doctest.h>

#include <algorithm>

#include "ambiglab/errors.hpp"
#include "ambiglab/quotient.hpp"
#include "support.hpp"

using namespace ambiglab;
using namespace testsupport;

namespace {

RealVec vec(std::initializer_list<double> v) {
  RealVec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

/// P(s) = P★(s)(s cos γ - sin γ) checked at a few points.
void check_factorization(const RealVec& w, const QuotientElement& e) {
  const double c = std::cos(e.gamma), s = std::sin(e.gamma);
  for (double t : {-1.3, -0.2, 0.4, 1.7}) {
    const double lhs = poly_eval(w, t);
    const double rhs = poly_eval(e.w_star, t) * (t * c - s);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * (1 + std::abs(lhs)) * std::pow(1 + std::abs(t), w.size()));
  }
}

}  // namespace

TEST_CASE("reconstruct builds the shift rotation") {
  const RealVec ws = vec({2, -1});
  const RealVec w = reconstruct(ws, kPi / 2);
  CHECK(max_abs(w - vec({0, -2, 1})) <= 1e-15);
}

TEST_CASE("a length-two vector has two elements") {
  const auto q = decompose(vec({1, -1}));
  REQUIRE(q.size() == 2);
  CHECK(q[0].gamma == doctest::Approx(kPi / 4));
  CHECK(q[1].gamma == doctest::Approx(5 * kPi / 4));
  CHECK(q[0].w_star(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(q[1].w_star(0) == doctest::Approx(-std::sqrt(2.0)));
}

TEST_CASE("real roots of the associated polynomial give the angles") {
  // P(s) = s^2 - 3 s + 2 = (s - 1)(s - 2)
  const RealVec w = vec({1, -3, 2});
  const auto q = decompose(w);
  REQUIRE(q.size() == 4);
  std::vector<double> expected = {kPi / 4, std::atan(2.0), kPi / 4 + kPi, std::atan(2.0) + kPi};
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(q[i].gamma == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(max_abs(reconstruct(q[i].w_star, q[i].gamma) - w) <= 1e-12);
    check_factorization(w, q[i]);
  }
}

TEST_CASE("no real roots means no elements") {
  CHECK(decompose(vec({1, 0, 1})).empty());  // s^2 + 1
  const RealVec x1 = vec({1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1});
  CHECK(decompose(x1).empty());
  CHECK(decompose_oracle(x1).empty());
}

TEST_CASE("real_polynomial_roots") {
  const auto r = real_polynomial_roots(vec({1, -6, 11, -6}));
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(2.0));
  CHECK(r[2] == doctest::Approx(3.0));
  CHECK(real_polynomial_roots(vec({2})).empty());
  CHECK_THROWS_AS(real_polynomial_roots(vec({0, 1})), Error);
}

TEST_CASE("steep angles use the backward recursion") {
  // γ close to π/2 makes forward recovery divide by a tiny cosine.
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const RealVec ws = gaussian(rng, 8);
    const double gamma = kPi / 2 - 1e-7 * (1 + trial);
    RealVec w = reconstruct(ws, gamma);
    if (std::abs(w(0)) < 1e-12) continue;
    const auto q = decompose(w);
    const auto hit = std::find_if(q.begin(), q.end(),
                                  [&](const auto& e) { return angle_distance(e.gamma, gamma) < 1e-6; });
    REQUIRE(hit != q.end());
    CHECK(max_abs(hit->w_star - ws) <= 1e-6 * max_abs(ws));
  }
}

TEST_CASE("random vectors: bounds, reconstruction and oracle agreement") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = rng.uniform_int(2, 12);
    const RealVec w = gaussian(rng, d);
    const auto q = decompose(w);
    CHECK(static_cast<int>(q.size()) <= 2 * d - 2);
    if (d % 2 == 0) CHECK(q.size() >= 2);
    CHECK(q.size() % 2 == 0);
    for (const auto& e : q) {
      CHECK(e.gamma >= 0.0);
      CHECK(e.gamma < 2 * kPi);
      CHECK(max_abs(reconstruct(e.w_star, e.gamma) - w) <= 1e-9 * max_abs(w));
      check_factorization(w, e);
    }
    const auto o = decompose_oracle(w);
    REQUIRE(o.size() == q.size());
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(angle_distance(o[i].gamma, q[i].gamma) <= 1e-6);
  }
}

TEST_CASE("pathological inputs are rejected") {
  CHECK_THROWS_AS(decompose(vec({0, 1, 1})), Error);
  CHECK_THROWS_AS(decompose(vec({1, 1, 0})), Error);
  CHECK_THROWS_AS(decompose(vec({1})), Error);
  CHECK_THROWS_AS(decompose_oracle(vec({1, 2}), 0), Error);
}

TEST_CASE("angle helpers") {
  CHECK(wrap_angle(-kPi / 2) == doctest::Approx(3 * kPi / 2));
  CHECK(wrap_angle(5 * kPi) == doctest::Approx(kPi));
  CHECK(angle_distance(0.1, 2 * kPi - 0.1) == doctest::Approx(0.2));
}
