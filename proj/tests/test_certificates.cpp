#include <gtest/gtest.h>

#include "cubecert/certificates.hpp"
#include "support.hpp"

using namespace cubecert;
using cubecert::testing::P;

TEST(Constants, Examples) {
  EXPECT_EQ(c_constant(1), 0);
  EXPECT_EQ(c_constant(2), Rational(1, 8));
  EXPECT_EQ(c_constant(3), Rational(1, 24));
  EXPECT_EQ(c_constant(4), Rational(1, 24));
  EXPECT_EQ(c_prime(1), 0);
  EXPECT_EQ(c_prime(2), Rational(1, 8));
  EXPECT_EQ(c_prime(4), Rational(5, 24));
  EXPECT_EQ(c_prime(4), Rational(1, 8) + Rational(1, 24) + Rational(1, 24));
}

TEST(Constants, Invariants) {
  for (int n = 1; n <= 12; ++n) EXPECT_LE(c_constant(n), 1);
  for (int m = 4; m <= 12; m += 2) EXPECT_EQ(c_prime(m), Rational(3, 8) - Rational(1, m + 2)) << m;
  for (int m = 2; m <= 12; ++m) EXPECT_LE(1 + c_constant(m) + c_prime(m), Rational(3, 2)) << m;
}

TEST(Certificates, EvenProduct) {
  const auto two = even_product_certificate(2, 2);
  EXPECT_TRUE(verify_construction(two, product_target(2, Rational(1, 8))).ok);
  EXPECT_EQ(two.construction, "sdp");
  const auto generous = even_product_certificate(2, 2, Rational(1));
  EXPECT_TRUE(verify_construction(generous, product_target(2, Rational(1))).ok);
}

TEST(Certificates, EvenProductFour) {
  const auto four = even_product_certificate(4, 4);
  EXPECT_TRUE(verify_construction(four, product_target(4, Rational(1, 24))).ok);
  const auto three = odd_from_even(four);
  EXPECT_EQ(three.num_vars, 3u);
  EXPECT_LE(three.order, four.order);
  EXPECT_TRUE(verify_construction(three, product_target(3, Rational(1, 24))).ok);
  EXPECT_EQ(three.construction, "instantiation");
}

TEST(Certificates, OddFromEven) {
  const auto two = product_certificate(2);
  const auto one = odd_from_even(two);
  EXPECT_EQ(one.num_vars, 1u);
  EXPECT_EQ(one.sigmas.size(), 1u);
  EXPECT_TRUE(verify_construction(one, P("x1 + 1/8", 1)).ok);
  EXPECT_THROW(odd_from_even(chain_certificate(1)), std::invalid_argument);
}

TEST(Certificates, ChainBase) {
  const auto c = chain_certificate(1);
  EXPECT_EQ(c.mu, 0);
  ASSERT_TRUE(c.sigma0.is_exact());
  EXPECT_EQ(c.sigma0.expand(), P("1 - 2*x1 + x1^2", 1));
  EXPECT_EQ(c.sigmas[0].expand(), Polynomial(1, 1));
  const auto rep = verify_construction(c, P("1 - x1", 1));
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.status, CertificateStatus::exact);
  EXPECT_TRUE(rep.residual.is_zero());

  const auto wrong = verify_construction(c, P("1 - x1 + 1/100", 1));
  EXPECT_FALSE(wrong.ok);
  EXPECT_EQ(abs(wrong.residual.constant_term()), Rational(1, 100));
  EXPECT_EQ(wrong.residual.terms().size(), 1u);
}

TEST(Certificates, Chain) {
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto c = chain_certificate(n);
    const auto target = chain_target(n);
    EXPECT_TRUE(verify_construction(c, target).ok) << n;
    EXPECT_EQ(c.construction, "chain");
  }
  EXPECT_EQ(chain_target(3), P("1 - x1*x2*x3 + 1/8 + 1/24", 3));
}

TEST(Certificates, MonomialProducts) {
  const auto a = monomial_product_certificate({1}, {0});
  EXPECT_TRUE(verify_construction(a, P("1 - x1", 1)).ok);
  const auto b = monomial_product_certificate({0}, {1});
  EXPECT_EQ(monomial_product_target({0}, {1}), P("x1", 1));
  EXPECT_TRUE(verify_construction(b, P("x1", 1)).ok);
  const auto c = monomial_product_certificate({2}, {0});
  EXPECT_TRUE(verify_construction(c, P("1 - x1^2 + 1/8", 1)).ok);
  const auto d = monomial_product_certificate({1, 0}, {0, 1});
  EXPECT_TRUE(verify_construction(d, monomial_product_target({1, 0}, {0, 1})).ok);
}

TEST(CertificatesProperty, PointwiseIdentity) {
  std::mt19937_64 rng(53);
  const std::vector<std::pair<QuadraticModuleCertificate, Polynomial>> cases{
      {chain_certificate(1), chain_target(1)},
      {chain_certificate(2), chain_target(2)},
      {monomial_product_certificate({1}, {1}), monomial_product_target({1}, {1})},
      {monomial_product_certificate({0, 1}, {1, 0}), monomial_product_target({0, 1}, {1, 0})},
  };
  for (const auto& [cert, target] : cases) {
    ASSERT_TRUE(cert.is_exact());
    const auto lhs = cert.expand();
    for (int i = 0; i < 50; ++i) {
      const auto pt = cubecert::testing::random_point(target.num_vars(), rng);
      EXPECT_EQ(lhs.evaluate(pt), target.evaluate(pt));
    }
  }
}
