#include <doctest.h>

#include "ambiglab/errors.hpp"
#include "ambiglab/generators.hpp"
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

double conv_gap(const AdversarialInstance& inst) {
  const RealVec z1 = convolve(inst.pair1.x, inst.pair1.y);
  return max_abs(z1 - convolve(inst.pair2.x, inst.pair2.y)) / max_abs(z1);
}

void check_members(const AdversarialInstance& inst, double tol = 1e-10) {
  for (const RealVec* x : {&inst.pair1.x, &inst.pair2.x}) CHECK(member(*x / max_abs(*x), inst.cones[0], tol));
  for (const RealVec* y : {&inst.pair1.y, &inst.pair2.y}) CHECK(member(*y / max_abs(*y), inst.cones[1], tol));
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ambiglab::Error");
  return ErrorCode::InternalConsistency;
}

}  // namespace

TEST_CASE("the two pairs differ by a rank-two null matrix") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = rng.uniform_int(2, 9), n = rng.uniform_int(2, 9);
    const RealVec u = gaussian(rng, m - 1), v = gaussian(rng, n - 1);
    const double theta = rng.uniform(0, kPi), phi = rng.uniform(0, kPi);
    const auto p = build_pair_from_params(u, v, theta, phi);
    const auto q = certificate_from_params(u, v, theta, phi);
    const RealMat diff = outer(p.x, p.y) - outer(q.x, q.y);
    CHECK(max_abs((diff - std::sin(phi - theta) * rank2_null_matrix(u, v)).reshaped()) <= 1e-12);
    CHECK(max_abs(convolve(p.x, p.y) - convolve(q.x, q.y)) <= 1e-12 * (1 + u.norm() * v.norm()));
  }
}

TEST_CASE("distance_to_lattice") {
  CHECK(distance_to_lattice(kPi / 2 + 0.01, 0, kPi / 2) == doctest::Approx(0.01));
  CHECK(distance_to_lattice(-0.2, 1.0, kPi) == doctest::Approx(1.2));
  CHECK(distance_to_lattice(3.0 + 2 * kPi, 3.0, kPi) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sparse family") {
  const IndexSet l1{4, 5, 6}, l2{3};
  const auto family = GeneratorFamily::sparse(l1, l2, 9, 6);
  CHECK(family.x_side().p() == 4);
  CHECK(family.y_side().p() == 2);
  CHECK(family.parameter_count() == 9 + 6 - 4 - 2);
  CHECK(family.claimed_dim() == 9 + 6 - 1 - 4 - 2);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = gen_sparse_instance(l1, l2, 9, 6, seed);
    CHECK(conv_gap(inst) <= 1e-12);
    check_members(inst);
    for (int j : l1) {
      CHECK(inst.pair1.x(j - 1) == 0.0);
      CHECK(inst.pair2.x(j - 1) == 0.0);
    }
    CHECK(inst.pair1.x.norm() == doctest::Approx(1.0));
    CHECK(inst.claimed_dim == family.claimed_dim());
  }

  const auto a = gen_sparse_instance(l1, l2, 9, 6, 7), b = gen_sparse_instance(l1, l2, 9, 6, 7);
  CHECK(a.pair1.x == b.pair1.x);
  CHECK(a.pair2.y == b.pair2.y);

  CHECK(code_of([] { GeneratorFamily::sparse({2}, {3}, 6, 6); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { GeneratorFamily::sparse({3}, {3}, 4, 6); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { GeneratorFamily::sparse({}, {3}, 6, 6); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("coded families of each type") {
  struct Case {
    IndexSet l1;
    RealVec b;
    IndexSet l2;
    RealVec bp;
    int m, n, t1, t2;
  };
  const Case cases[] = {
      {{3, 4, 6}, vec({1, 1, 1}), {2, 5}, vec({0.3, -1.2}), 9, 8, 1, 2},
      {{2, 4}, vec({1, -1}), {3, 4, 5}, vec({1, 0.5, 0.25}), 6, 7, 2, 1},
      {{3, 4}, vec({0, 0}), {3, 4}, vec({2, 2}), 7, 6, 0, 1},
      {{3, 4, 5}, vec({1, -2, 4}), {2, 3}, vec({1, -0.5}), 8, 5, 1, 1},
      {{2, 6}, vec({0.7, 1.1}), {3}, vec({0}), 7, 5, 2, 0},
  };
  for (const auto& c : cases) {
    const auto family = GeneratorFamily::coded(c.l1, c.b, c.l2, c.bp, c.m, c.n);
    CHECK(family.x_side().t() == c.t1);
    CHECK(family.y_side().t() == c.t2);
    const int p = p_of(c.l1), pp = p_of(c.l2);
    CHECK(family.claimed_dim() == c.m + c.n - 1 - p - pp + c.t1 + c.t2);
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const RealVec point = family.sample_point(rng);
      const Realization r = family.realize(point);
      CHECK(r.overlap_residual_x <= 1e-12);
      CHECK(r.overlap_residual_y <= 1e-12);
      const auto inst = family.instance(point);
      CHECK(conv_gap(inst) <= 1e-12);
      check_members(inst);
      if (c.t1 > 0) {
        // x(Λ') = c1 b and x'(Λ') = c2 b with the recorded scalars.
        for (std::size_t i = 0; i < c.l1.size(); ++i) {
          CHECK(inst.pair1.x(c.l1[i] - 1) == doctest::Approx(*inst.params.c1 * c.b(i)));
          CHECK(inst.pair2.x(c.l1[i] - 1) == doctest::Approx(*inst.params.c2 * c.b(i)));
        }
      }
      if (c.t2 > 0) {
        for (std::size_t i = 0; i < c.l2.size(); ++i) {
          CHECK(inst.pair1.y(c.l2[i] - 1) == doctest::Approx(*inst.params.c1p * c.bp(i)));
          CHECK(inst.pair2.y(c.l2[i] - 1) == doctest::Approx(*inst.params.c2p * c.bp(i)));
        }
      }
    }
  }
}

TEST_CASE("illustrative coded vector") {
  const IndexSet lambda{3, 4, 7, 8, 9, 12};
  const double r = 5.0 / 3.0;
  const RealVec chain = vec({0.5, 0.5 * r, -0.3, -0.3 * r, -0.3 * r * r, -0.15});
  const auto inst = gen_coded_instance(lambda, chain, {2, 4}, vec({1, 1}), 14, 6, 3);
  CHECK(conv_gap(inst) <= 1e-12);
  check_members(inst);

  // The printed code only passes classification at a loose tolerance and then
  // admits no consistent overlap assignment.
  const RealVec printed = vec({0.5, 0.835, -0.3, -0.5, -0.835, -0.15});
  CHECK(code_of([&] { gen_coded_instance(lambda, printed, {2, 4}, vec({1, 1}), 14, 6, 3); }) ==
        ErrorCode::UnsupportedType);
  CHECK(code_of([&] { gen_coded_instance(lambda, printed, {2, 4}, vec({1, 1}), 14, 6, 3, 1e-3); }) ==
        ErrorCode::InternalConsistency);
}

TEST_CASE("unclassified pairs are rejected") {
  CHECK(code_of([] { GeneratorFamily::coded({3, 4, 5}, vec({1, 2, 7}), {2}, vec({1}), 8, 5); }) ==
        ErrorCode::UnsupportedType);
  CHECK(code_of([] { GeneratorFamily::coded({2, 3}, vec({0, 0}), {2}, vec({1}), 8, 5); }) ==
        ErrorCode::UnsupportedType);
}

TEST_CASE("admissibility of angles") {
  const auto family = GeneratorFamily::coded({3, 4}, vec({1, 2}), {2}, vec({1}), 7, 5);
  Rng rng(4);
  RealVec point = family.sample_point(rng);
  const Eigen::Index theta_at = static_cast<Eigen::Index>(family.x_side().free_indices.size()) + 1;
  CHECK(family.theta_of(point) == point(theta_at));
  CHECK_NOTHROW(family.check_admissible(point));

  auto with_angles = [&](double theta, double phi) {
    RealVec p = point;
    p(theta_at) = theta;
    p(p.size() - 1) = phi;
    return p;
  };
  const double b = std::atan(2.0);
  CHECK(code_of([&] { family.check_admissible(with_angles(kPi / 2 + 1e-4, 0.3)); }) ==
        ErrorCode::IllConditionedPoint);
  CHECK(code_of([&] { family.check_admissible(with_angles(0.3, 0.3 + kPi - 1e-4)); }) ==
        ErrorCode::IllConditionedPoint);
  CHECK(code_of([&] { family.check_admissible(with_angles(b + 1e-4, 0.3)); }) == ErrorCode::IllConditionedPoint);
  CHECK_NOTHROW(family.check_admissible(with_angles(0.3, 0.9)));
}

TEST_CASE("mixed instances keep y and certify it") {
  Rng rng(8);
  const IndexSet lambda{4, 5};
  for (int trial = 0; trial < 30; ++trial) {
    const RealVec y = gaussian(rng, 6);
    const auto inst = gen_mixed_instance(lambda, 8, y, trial);
    CHECK(inst.pair1.y == y);
    CHECK(conv_gap(inst) <= 1e-9);
    CHECK(inst.cones[0].kind == ConeKind::Zero);
    CHECK(inst.cones[1].kind == ConeKind::Unconstrained);
    CHECK(inst.claimed_dim == 8 + 6 - p_of(lambda) - 1);
    check_members(inst);
  }
  CHECK(code_of([] { gen_mixed_instance({4}, 8, RealVec::Ones(5), 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mixed family encodes the unconstrained side") {
  const auto family = GeneratorFamily::mixed(IndexSet::range(4, 8), 11, 7);
  CHECK(family.claimed_dim() == 11 + 7 - 6 - 1);
  CHECK(family.y_side().type.value == PairTypeLabel::Type2);
}

TEST_CASE("random side configurations have the requested type") {
  Rng rng(12);
  for (auto type : {PairTypeLabel::Type0, PairTypeLabel::Type1, PairTypeLabel::Type2}) {
    for (int trial = 0; trial < 30; ++trial) {
      const int d = rng.uniform_int(5, 12);
      const auto [lambda, b] = random_side_config(type, d, rng);
      CHECK(classify_pair(lambda, b, d).value == type);
    }
  }
  CHECK_THROWS_AS(random_side_config(PairTypeLabel::Unclassified, 8, rng), Error);
}

TEST_CASE("rotational family over seed vectors") {
  const RealVec x1 = vec({1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1}), y1 = vec({1, 0, 0, 0, 1, 0, 0});
  const RealVec x2 = vec({1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0}), y2 = vec({1, 0, 1, 0, 1, 0, 1});
  const double theta = 0.4, phi = 1.1;
  const auto [p1, p2] = rotational_family(x1, y1, x2, y2, theta, phi);
  const RealVec closed = rotational_closed_form(x1, y1, x2, y2, theta, phi);
  CHECK(max_abs(convolve(p1.x, p1.y) - closed) <= 1e-12);
  CHECK(max_abs(convolve(p2.x, p2.y) - closed) <= 1e-12);
  CHECK(max_abs(p1.x - (x1 * std::cos(theta) - x2 * std::sin(theta))) == 0.0);

  CHECK_THROWS_AS(rotational_family(x1, y1, x1, y1, theta, phi), Error);  // collinear seeds
  CHECK_THROWS_AS(rotational_family(x1, y1, x2, y1, theta, phi), Error);  // different outputs
  CHECK_THROWS_AS(rotational_family(x1, y1, x2, y2, theta, theta + kPi), Error);
}
