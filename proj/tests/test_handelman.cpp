#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "cubecert/bounds.hpp"
#include "cubecert/handelman.hpp"
#include "cubecert/lp.hpp"
#include "cubecert/oracle.hpp"
#include "support.hpp"

using namespace cubecert;
using cubecert::testing::P;

namespace {

LinearProgram dense_lp(const std::vector<std::vector<Rational>>& a, std::vector<Rational> rhs, std::vector<Rational> cost) {
  LinearProgram lp;
  lp.num_rows = a.size();
  lp.rhs = std::move(rhs);
  lp.cost = std::move(cost);
  lp.columns.resize(lp.cost.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (a[i][j] != 0) lp.columns[j].push_back({i, a[i][j]});
    }
  }
  return lp;
}

}  // namespace

TEST(Lp, SmallOptimum) {
  // min -x - y  s.t. x + s1 = 2, y + s2 = 3, x + y + s3 = 4
  const auto lp = dense_lp({{1, 0, 1, 0, 0}, {0, 1, 0, 1, 0}, {1, 1, 0, 0, 1}}, {2, 3, 4}, {-1, -1, 0, 0, 0});
  const auto r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_EQ(r.objective, -4);
}

TEST(Lp, InfeasibleAndUnbounded) {
  EXPECT_EQ(solve_lp(dense_lp({{1, 1}}, {-1}, {0, 0})).status, LpStatus::infeasible);
  EXPECT_EQ(solve_lp(dense_lp({{1, -1}}, {1}, {0, -1})).status, LpStatus::unbounded);
}

TEST(Lp, ExactFractions) {
  // min x3 s.t. 3x1 + x3 = 1, 2x2 - x3 = 1/3 -> x3 = 0, x1 = 1/3, x2 = 1/6.
  const auto r = solve_lp(dense_lp({{3, 0, 1}, {0, 2, -1}}, {1, Rational(1, 3)}, {0, 0, 1}));
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_EQ(r.x[0], Rational(1, 3));
  EXPECT_EQ(r.x[1], Rational(1, 6));
}

TEST(Lp, FloatBasisAndExactSimplexAgree) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> support(0, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 3 + trial % 4;
    const std::size_t n = 2 * m + 3;
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n));
    for (auto& row : a) {
      for (auto& v : row) v = entry(rng);
    }
    // rhs from a sparse nonnegative point, so the LP is feasible and degenerate.
    std::vector<Rational> rhs(m);
    for (std::size_t j = 0; j < n; ++j) {
      const int x = support(rng) == 0 ? 1 : 0;
      for (std::size_t i = 0; i < m; ++i) rhs[i] += a[i][j] * x;
    }
    std::vector<Rational> cost(n);
    for (auto& c : cost) c = entry(rng);
    const auto lp = dense_lp(a, rhs, cost);
    LpOptions cold;
    cold.float_warm_start = false;
    const auto x = solve_lp(lp);
    const auto y = solve_lp(lp, cold);
    ASSERT_EQ(x.status, y.status);
    if (x.status != LpStatus::optimal) continue;
    EXPECT_EQ(x.objective, y.objective);
    for (std::size_t i = 0; i < m; ++i) {
      Rational lhs;
      for (std::size_t j = 0; j < n; ++j) lhs += a[i][j] * x.x[j];
      EXPECT_EQ(lhs, rhs[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_GE(x.x[j], 0);
      Rational reduced = cost[j];
      for (std::size_t i = 0; i < m; ++i) reduced -= x.duals[i] * a[i][j];
      EXPECT_GE(reduced, 0);
    }
  }
}

TEST(Handelman, EnumerateBasis) {
  EXPECT_EQ(enumerate_handelman_basis(1, 1).size(), 3u);
  const auto b = enumerate_handelman_basis(1, 2);
  ASSERT_EQ(b.size(), 6u);
  EXPECT_EQ(b[0].expand(), Polynomial(1, 1));
  EXPECT_EQ(enumerate_handelman_basis(2, 0).size(), 1u);
  const auto big = enumerate_handelman_basis(2, 4);
  EXPECT_EQ(big.size(), 70u);
  for (std::size_t i = 0; i < big.size(); ++i) {
    for (std::size_t j = i + 1; j < big.size(); ++j) EXPECT_FALSE(big[i] == big[j]);
  }
}

TEST(Handelman, Examples) {
  const auto g = P("x1 - x1^2", 1);
  const auto a = handelman_lower_bound(g, 2);
  ASSERT_TRUE(a.mu);
  EXPECT_EQ(*a.mu, 0);
  ASSERT_EQ(a.certificate.terms.size(), 1u);
  EXPECT_EQ(a.certificate.terms[0].first.h, ExponentVector{1});
  EXPECT_EQ(a.certificate.terms[0].first.k, ExponentVector{1});
  EXPECT_EQ(a.certificate.terms[0].second, 1);

  EXPECT_EQ(*handelman_lower_bound(P("x1", 1), 1).mu, 0);
  const auto q = handelman_lower_bound(P("x1^2 - x1 + 1", 1), 2);
  EXPECT_EQ(*q.mu, Rational(1, 2));
  EXPECT_TRUE(verify_handelman(q.certificate, P("x1^2 - x1 + 1", 1)).ok);
  EXPECT_THROW(handelman_lower_bound(P("x1^3", 1), 2), std::invalid_argument);
}

TEST(Handelman, VerifyRejects) {
  const auto g = P("x1 - x1^2", 1);
  auto cert = handelman_lower_bound(g, 2).certificate;
  EXPECT_TRUE(verify_handelman(cert, g).ok);

  auto perturbed = cert;
  perturbed.terms[0].second += Rational(1, 1000);
  const auto bad = verify_handelman(perturbed, g);
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.residual, scale(g, Rational(1, 1000)));

  auto negative = cert;
  negative.terms.push_back({{{0}, {0}}, -1});
  negative.mu += 1;
  const auto neg = verify_handelman(negative, g);
  EXPECT_FALSE(neg.ok);
  EXPECT_NE(neg.diagnostic.find("negative"), std::string::npos) << neg.diagnostic;
}

TEST(HandelmanProperty, MonotoneShiftCovariantAndSound) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    auto p = cubecert::testing::random_small(2, 2, rng);
    if (p.is_zero()) continue;
    const auto upper = reference_min(p, Rational(1, 1000)).hi;
    Rational previous;
    for (int r = 2; r <= 5; ++r) {
      const auto res = handelman_lower_bound(p, r);
      ASSERT_TRUE(res.mu);
      EXPECT_TRUE(verify_handelman(res.certificate, p).ok);
      EXPECT_LE(*res.mu, upper);
      if (r > 2) {
        EXPECT_LE(previous, *res.mu);
      }
      previous = *res.mu;
    }
    const Rational c(-5, 7);
    EXPECT_EQ(*handelman_lower_bound(p + Polynomial(2, c), 4).mu, *handelman_lower_bound(p, 4).mu + c);
    const auto swapped = p.map_variables(std::vector<VariableImage>{VariableImage::var(1), VariableImage::var(0)}, 2);
    EXPECT_EQ(*handelman_lower_bound(swapped, 4).mu, *handelman_lower_bound(p, 4).mu);
  }
}

// The literal LP: every product with |h|+|k| <= r, monomial rows, mu as a
// free variable split into two nonnegative parts.
TEST(HandelmanProperty, MatchesLiteralLp) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    const auto p = cubecert::testing::random_small(2, 2, rng);
    const int r = 4;
    const auto basis = enumerate_handelman_basis(2, r);
    std::map<ExponentVector, std::size_t, GradedLexLess> row_of;
    for (const auto& e : monomial_basis(2, r)) row_of.emplace(e, row_of.size());
    LinearProgram lp;
    lp.num_rows = row_of.size();
    lp.rhs.assign(lp.num_rows, Rational(0));
    for (const auto& [e, c] : p.terms()) lp.rhs[row_of.at(e)] = c;
    for (const auto& element : basis) {
      std::vector<SparseEntry> column;
      const Polynomial q = element.expand();
      for (const auto& [e, c] : q.terms()) column.push_back({row_of.at(e), c});
      lp.columns.push_back(std::move(column));
      lp.cost.push_back(0);
    }
    const std::size_t constant = row_of.at(ExponentVector(2, 0));
    lp.columns.push_back({{constant, Rational(1)}});
    lp.cost.push_back(-1);
    lp.columns.push_back({{constant, Rational(-1)}});
    lp.cost.push_back(1);
    LpOptions cold;
    cold.float_warm_start = false;
    const auto literal = solve_lp(lp, cold);
    ASSERT_EQ(literal.status, LpStatus::optimal);
    EXPECT_EQ(*handelman_lower_bound(p, r).mu, -literal.objective) << p.to_string();
  }
}

TEST(HandelmanProperty, ErrorBoundHolds) {
  std::mt19937_64 rng(37);
  struct Case {
    std::size_t n;
    int m;
  };
  for (const Case c : {Case{2, 2}, Case{2, 3}, Case{3, 2}}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto p = cubecert::testing::random_small(c.n, c.m, rng);
      if (p.degree() != c.m) continue;
      const int r = c.m * static_cast<int>(c.n);
      const auto bound = schmudgen_error(c.m, static_cast<int>(c.n), l_norm(p), r);
      ASSERT_TRUE(bound.valid());
      const auto pmin = reference_min(p, Rational(1, 100));
      const auto res = handelman_lower_bound(p, r);
      ASSERT_TRUE(res.mu);
      EXPECT_LE(pmin.hi - *res.mu, *bound.exact) << p.to_string();
    }
  }
}
