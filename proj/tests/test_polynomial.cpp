#include <gtest/gtest.h>

#include "cubecert/polynomial.hpp"
#include "support.hpp"

using namespace cubecert;
using cubecert::testing::P;
using cubecert::testing::Q;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(to_string(Q("6/4")), "3/2");
  EXPECT_EQ(to_string(Q("-2/4")), "-1/2");
  EXPECT_EQ(to_string(Q("7")), "7");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Rational, DirectedRounding) {
  const Rational third(1, 3);
  EXPECT_LE(from_double(round_down(third)), third);
  EXPECT_GE(from_double(round_up(third)), third);
  EXPECT_EQ(round_up(Rational(1, 2)), 0.5);
  EXPECT_EQ(approximate(0.333333333, 10), third);
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(factorial(5), 120);
}

TEST(Polynomial, ParseExamples) {
  const auto a = P("x1*x2", 2);
  ASSERT_EQ(a.terms().size(), 1u);
  EXPECT_EQ(a.coefficient({1, 1}), 1);

  const auto b = P("1/8 + x1 - x1^2", 1);
  EXPECT_EQ(b.coefficient({0}), Rational(1, 8));
  EXPECT_EQ(b.coefficient({1}), 1);
  EXPECT_EQ(b.coefficient({2}), -1);
  EXPECT_EQ(b.terms().size(), 3u);

  EXPECT_TRUE(P("x1 - x1 + 0*x2", 2).is_zero());
  EXPECT_EQ(P("3/2*x1^2*x2 - x3 + 1/8", 3).coefficient({2, 1, 0}), Rational(3, 2));
}

TEST(Polynomial, ParseErrors) {
  EXPECT_THROW(P("x3", 2), std::exception);
  EXPECT_THROW(P("x1 +", 1), ParseError);
  EXPECT_THROW(P("2**x1", 1), ParseError);
  try {
    P("x1 + y", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
}

TEST(Polynomial, Arithmetic) {
  const auto x = P("x1", 1);
  EXPECT_EQ(x * (Polynomial(1, 1) - x), P("x1 - x1^2", 1));
  const auto p = P("x1*x2 - 3*x2 + 2", 2);
  EXPECT_TRUE((p + (-p)).is_zero());
  EXPECT_EQ(scale(P("x1*x2", 2), Rational(1, 8)), P("1/8*x1*x2", 2));
  EXPECT_THROW(P("x1", 1) + P("x1", 2), DimensionMismatch);
  EXPECT_EQ(Polynomial(2).degree(), -1);
}

TEST(Polynomial, Evaluate) {
  const std::vector<Rational> half{Rational(1, 2), Rational(1, 2)};
  EXPECT_EQ(P("x1*x2", 2).evaluate(half), Rational(1, 4));
  const std::vector<Rational> zero{0};
  EXPECT_EQ(P("x1 - x1^2", 1).evaluate(zero), 0);
  const std::vector<Rational> pt{1, Rational(1, 3)};
  EXPECT_EQ(P("x1^2 + 3*x2", 2).evaluate(pt), 2);
  EXPECT_THROW(P("x1", 1).evaluate(half), DimensionMismatch);
}

TEST(Polynomial, Substitute) {
  EXPECT_EQ(P("x1*x2", 2).substitute(1, Polynomial(2, 1)), P("x1", 2));
  const auto g = P("x1 - x1^2", 1);
  EXPECT_EQ(g.substitute(0, P("1 - x1", 1)), g);
  EXPECT_EQ(P("x1*x2", 2).substitute(1, P("x1", 2)), P("x1^2", 2));
  EXPECT_THROW(P("x1", 1).substitute(3, Polynomial(1, 1)), std::out_of_range);
}

TEST(Polynomial, MapVariables) {
  const std::vector<VariableImage> images{VariableImage::var(0), VariableImage::one_minus(0),
                                          VariableImage::constant_one()};
  EXPECT_EQ(P("x1*x2*x3", 3).map_variables(images, 1), P("x1 - x1^2", 1));
}

TEST(Polynomial, LNorm) {
  EXPECT_EQ(l_norm(P("5", 1)), 5);
  EXPECT_EQ(l_norm(P("x1*x2", 2)), Rational(1, 2));
  EXPECT_EQ(l_norm(P("x1^2 + 3*x2", 2)), 3);
  EXPECT_THROW(l_norm(Polynomial(2)), std::domain_error);
}

TEST(Polynomial, MonomialBasis) {
  EXPECT_EQ(monomial_basis(1, 2), (std::vector<ExponentVector>{{0}, {1}, {2}}));
  EXPECT_EQ(monomial_basis(2, 1), (std::vector<ExponentVector>{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(monomial_basis(2, 2).size(), 6u);
  EXPECT_EQ(monomial_basis(3, 4).size(), 35u);
}

TEST(PolynomialProperty, RingLaws) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto p = cubecert::testing::random_small(n, 2, rng);
    const auto q = cubecert::testing::random_small(n, 2, rng);
    const auto s = cubecert::testing::random_small(n, 1, rng);
    EXPECT_EQ((p + q) + s, p + (q + s));
    EXPECT_EQ(p * (q + s), p * q + p * s);
    EXPECT_EQ(p * q, q * p);
    const auto pt = cubecert::testing::random_point(n, rng);
    EXPECT_EQ((p * q).evaluate(pt), p.evaluate(pt) * q.evaluate(pt));
  }
}

TEST(PolynomialProperty, ReflectionIsInvolution) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto p = cubecert::testing::random_small(n, 3, rng);
    const std::size_t i = trial % n;
    const auto flip = Polynomial(n, 1) - Polynomial::variable(n, i);
    EXPECT_EQ(p.substitute(i, flip).substitute(i, flip), p);
  }
}

TEST(PolynomialProperty, LNormHomogeneous) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = cubecert::testing::random_small(2, 3, rng);
    if (p.is_zero()) continue;
    Rational c(trial % 2 ? -7 : 5, 3 + trial);
    c.canonicalize();
    EXPECT_EQ(l_norm(scale(p, c)), abs(c) * l_norm(p));
  }
}

TEST(PolynomialProperty, PrintParseRoundTrip) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    auto p = scale(cubecert::testing::random_small(n, 3, rng), Rational(1, 1 + trial % 5));
    EXPECT_EQ(parse_polynomial(p.to_string(), n), p) << p.to_string();
  }
}
