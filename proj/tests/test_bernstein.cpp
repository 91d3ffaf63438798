#include <gtest/gtest.h>

#include "cubecert/bernstein.hpp"
#include "cubecert/oracle.hpp"
#include "support.hpp"

using namespace cubecert;
using cubecert::testing::P;

TEST(Bernstein, BasisExamples) {
  EXPECT_EQ(bernstein_basis(1, {1}), P("x1", 1));
  EXPECT_EQ(bernstein_basis(2, {1}), P("2*x1 - 2*x1^2", 1));
  EXPECT_EQ(bernstein_basis(1, {1, 0}), P("x1 - x1*x2", 2));
  EXPECT_THROW(bernstein_basis(2, {3}), std::out_of_range);
}

TEST(Bernstein, ApproxExamples) {
  EXPECT_EQ(bernstein_approx(P("x1", 1), 1), P("x1", 1));
  EXPECT_EQ(bernstein_approx(P("x1^2", 1), 2), P("x1^2 + 1/2*x1 - 1/2*x1^2", 1));
  EXPECT_EQ(bernstein_approx(P("x1*x2", 2), 1), P("x1*x2", 2));
}

TEST(Bernstein, PartitionOfUnity) {
  for (int d = 1; d <= 4; ++d) {
    for (std::size_t n = 1; n <= 3; ++n) EXPECT_TRUE(partition_of_unity_check(d, n)) << d << " " << n;
  }
}

TEST(Bernstein, BasisConversionExamples) {
  const auto a = to_bernstein_basis(P("x1", 1), 1);
  EXPECT_EQ(a.at({0}), 0);
  EXPECT_EQ(a.at({1}), 1);
  const auto b = to_bernstein_basis(P("x1^2", 1), 2);
  EXPECT_EQ(b.coefficients(), (std::vector<Rational>{0, 0, 1}));
  for (int d = 1; d <= 4; ++d) {
    const auto one = to_bernstein_basis(Polynomial(2, 1), d);
    for (const auto& c : one.coefficients()) EXPECT_EQ(c, 1);
  }
  EXPECT_THROW(to_bernstein_basis(P("x1^3", 1), 2), std::invalid_argument);
}

TEST(Bernstein, EnclosureExamples) {
  auto e = coefficient_enclosure(P("x1", 1), 1);
  EXPECT_EQ(e.lo, 0);
  EXPECT_EQ(e.hi, 1);
  e = coefficient_enclosure(P("x1 - x1^2", 1), 2);
  EXPECT_EQ(e.lo, 0);
  EXPECT_EQ(e.hi, Rational(1, 2));
  e = coefficient_enclosure(P("7", 1), 1);
  EXPECT_EQ(e.lo, 7);
  EXPECT_EQ(e.hi, 7);
}

TEST(BernsteinProperty, ReproducesAffine) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int d = 1; d <= 6; ++d) {
      if (n == 3 && d > 4) continue;
      const auto p = cubecert::testing::random_small(n, 1, rng);
      EXPECT_EQ(bernstein_approx(p, d), p);
    }
  }
}

TEST(BernsteinProperty, EndpointInterpolation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 2;
    const auto p = cubecert::testing::random_small(n, 3, rng);
    const auto b = bernstein_approx(p, 3);
    for (int corner : {0, 1}) {
      const std::vector<Rational> pt(n, corner);
      EXPECT_EQ(b.evaluate(pt), p.evaluate(pt));
    }
  }
}

TEST(BernsteinProperty, RoundTripAndEnclosure) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const int deg = 1 + trial % 3;
    const auto p = cubecert::testing::random_small(n, deg, rng);
    for (int d = deg; d <= 5; ++d) {
      EXPECT_EQ(to_bernstein_basis(p, d).to_polynomial(), p);
    }
    const auto e = coefficient_enclosure(p, deg);
    Rational width = e.hi - e.lo;
    for (int d = deg + 1; d <= 5; ++d) {
      const auto next = coefficient_enclosure(p, d);
      EXPECT_LE(next.hi - next.lo, width);
      width = next.hi - next.lo;
    }
    for (const auto& v : grid_values(p, 4)) {
      const auto enc = coefficient_enclosure(p, std::max(deg, 1));
      EXPECT_LE(enc.lo, v);
      EXPECT_LE(v, enc.hi);
    }
  }
}

TEST(Oracle, GridExamples) {
  EXPECT_EQ(grid_upper_bound_on_min(P("x1", 1), 1), 0);
  EXPECT_EQ(grid_upper_bound_on_min(P("x1^2 - x1 + 1", 1), 2), Rational(3, 4));
  EXPECT_EQ(grid_upper_bound_on_min(P("x1^2 - x1 + 1", 1), 1), 1);
}

TEST(Oracle, ReferenceExamples) {
  const Rational tol(1, 1000);
  const auto a = reference_min(P("x1 - x1^2", 1), tol);
  EXPECT_EQ(a.lo, 0);
  EXPECT_EQ(a.hi, 0);
  const auto c = reference_min(P("5/3", 2), tol);
  EXPECT_EQ(c.lo, Rational(5, 3));
  EXPECT_EQ(c.hi, Rational(5, 3));
  const auto q = reference_min(P("x1^2 - x1 + 1", 1), tol);
  EXPECT_TRUE(q.contains(Rational(3, 4)));
  EXPECT_LE(q.width(), tol);
  EXPECT_TRUE(q.converged);

  EXPECT_TRUE(reference_max(P("x1 - x1^2", 1), tol).contains(Rational(1, 4)));
  const auto x = reference_max(P("x1", 1), tol);
  EXPECT_EQ(x.lo, 1);
  EXPECT_EQ(x.hi, 1);
  EXPECT_TRUE(reference_max(P("-x1*x2", 2), tol).contains(0));
}

TEST(OracleProperty, ConsistentEnclosures) {
  std::mt19937_64 rng(21);
  const Rational tol(1, 100);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 1 + trial % 2;
    const auto p = cubecert::testing::random_small(n, 3, rng);
    const auto lo = reference_min(p, tol);
    EXPECT_LE(lo.lo, lo.hi);
    for (int d = 1; d <= 8; ++d) EXPECT_LE(lo.lo, grid_upper_bound_on_min(p, d));

    const auto neg = reference_min(-p, tol);
    const auto hi = reference_max(p, tol);
    EXPECT_EQ(neg.lo, -hi.hi);
    EXPECT_EQ(neg.hi, -hi.lo);

    const Rational c(7, 3);
    const auto shifted = reference_min(p + Polynomial(n, c), tol);
    EXPECT_EQ(shifted.lo, lo.lo + c);
    EXPECT_EQ(shifted.hi, lo.hi + c);
  }
}

TEST(Oracle, EffortCap) {
  EXPECT_EQ(enclosure_effort_cap(2), 512);
  EXPECT_EQ(enclosure_effort_cap(3), 64);
}
