#include <doctest.h>

#include "ambiglab/convolution.hpp"
#include "support.hpp"

using namespace ambiglab;
using namespace testsupport;

TEST_CASE("convolve matches a hand-computed product") {
  RealVec x(3), y(2), z(4);
  x << 1, 2, -1;
  y << 3, 0.5;
  z << 3, 6.5, -2, -0.5;
  CHECK(convolve(x, y) == z);
}

TEST_CASE("convolve agrees with an explicit Toeplitz product") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = rng.uniform_int(1, 12), n = rng.uniform_int(1, 12);
    const RealVec x = gaussian(rng, m), y = gaussian(rng, n);
    const RealVec z = convolve(x, y);
    REQUIRE(z.size() == m + n - 1);
    CHECK(max_abs(z - toeplitz_oracle(x, n) * y) <= 1e-13 * (1 + max_abs(z)));
    CHECK(max_abs(z - convolve(y, x)) <= 1e-13 * (1 + max_abs(z)));
  }
}

TEST_CASE("integer and floating point convolution agree exactly on integer data") {
  IntVec x(11), y(7);
  x << 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1;
  y << 1, 0, 0, 0, 1, 0, 0;
  const IntVec zi = convolve<std::int64_t>(x, y);
  const RealVec zd = convolve(RealVec(x.cast<double>()), RealVec(y.cast<double>()));
  CHECK(zi.cast<double>() == zd);
}

TEST_CASE("lift_apply sums anti-diagonals") {
  RealMat w(2, 3);
  w << 1, 2, 3,
       4, 5, 6;
  RealVec expected(4);
  expected << 1, 6, 8, 6;
  CHECK(lift_apply(w) == expected);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = rng.uniform_int(1, 9), n = rng.uniform_int(1, 9);
    const RealVec x = gaussian(rng, m), y = gaussian(rng, n);
    CHECK(max_abs(lift_apply(outer(x, y)) - convolve(x, y)) <= 1e-13 * (1 + max_abs(convolve(x, y))));
  }
}

TEST_CASE("rank-two null matrices") {
  SUBCASE("annihilated by the lifted operator and of rank two") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      const int m = rng.uniform_int(2, 10), n = rng.uniform_int(2, 10);
      const RealVec u = gaussian(rng, m - 1), v = gaussian(rng, n - 1);
      const RealMat q = rank2_null_matrix(u, v);
      REQUIRE(q.rows() == m);
      REQUIRE(q.cols() == n);
      CHECK(max_abs(lift_apply(q)) <= 1e-12 * u.norm() * v.norm());
      CHECK(numerical_rank(q) == 2);
      CHECK(in_nullspace(q, 2));
      CHECK_FALSE(in_nullspace(q, 1));
    }
  }
  SUBCASE("explicit entries") {
    RealVec u(1), v(1);
    u << 2;
    v << 3;
    RealMat expected(2, 2);
    expected << 0, 6,
               -6, 0;
    CHECK(rank2_null_matrix(u, v) == expected);
  }
  SUBCASE("zero factor") {
    const RealMat q = rank2_null_matrix(RealVec::Zero(3), RealVec::Ones(2));
    CHECK(numerical_rank(q) == 0);
  }
  SUBCASE("integer path is exact") {
    IntVec u(3), v(2);
    u << 1, -2, 3;
    v << 4, 5;
    CHECK(lift_apply<std::int64_t>(rank2_null_matrix<std::int64_t>(u, v)).isZero());
  }
}

TEST_CASE("delay matrices and the relay model") {
  const RealMat d = delay_matrix(3, 4, 5);
  REQUIRE(d.rows() == 8);
  REQUIRE(d.cols() == 4);
  for (int i = 0; i < 4; ++i)
    for (int r = 0; r < 8; ++r) CHECK(d(r, i) == (r == i + 2 ? 1.0 : 0.0));

  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = rng.uniform_int(1, 10), n = rng.uniform_int(1, 10);
    RealVec g = gaussian(rng, m);
    for (int j = 0; j < m; ++j)
      if (rng.coin()) g(j) = 0.0;
    const RealVec h = gaussian(rng, n);
    CHECK(max_abs(channel_superposition(g, h) - convolve(g, h)) <= 1e-12);
  }
}

TEST_CASE("numerical rank conventions") {
  CHECK(numerical_rank(RealMat::Zero(3, 4)) == 0);
  CHECK(numerical_rank(RealMat::Identity(3, 3)) == 3);
  RealMat nearly(2, 2);
  nearly << 1, 0,
            0, 1e-12;
  CHECK(numerical_rank(nearly) == 1);
  CHECK(numerical_rank(nearly, 1e-13) == 2);
}
