#include <gtest/gtest.h>

#include <cmath>

#include "cubecert/handelman.hpp"
#include "cubecert/oracle.hpp"
#include "cubecert/sdp.hpp"
#include "cubecert/sos.hpp"
#include "support.hpp"

using namespace cubecert;
using cubecert::testing::P;

TEST(Sdp, OneByOneFeasibility) {
  SdpProblem prob;
  prob.block_sizes = {1};
  prob.constraints = {{{0, 0, 0, 1.0}}};
  prob.rhs = {1.0};
  const auto sol = sdp_solve(prob);
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  EXPECT_NEAR(sol.x[0](0, 0), 1.0, 1e-8);
  EXPECT_LE(std::abs(sol.primal_objective - sol.dual_objective), 1e-8);
}

TEST(Sdp, GramIdentity) {
  // min X00 with X11 = 1, 2 X01 = -1: the Gram matrix of x^2 - x + 1 - mu.
  SdpProblem prob;
  prob.block_sizes = {2};
  prob.constraints = {{{0, 1, 1, 1.0}}, {{0, 1, 0, 1.0}}};
  prob.rhs = {1.0, -1.0};
  prob.objective = {{0, 0, 0, 1.0}};
  const auto sol = sdp_solve(prob);
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  EXPECT_NEAR(1.0 - sol.primal_objective, 0.75, 1e-7);
}

TEST(Sdp, DetectsInfeasibility) {
  SdpProblem prob;
  prob.block_sizes = {1};
  prob.constraints = {{{0, 0, 0, 1.0}}};
  prob.rhs = {-1.0};
  EXPECT_EQ(sdp_solve(prob).status, SdpStatus::primal_infeasible);
}

TEST(Sdp, Deterministic) {
  SdpProblem prob;
  prob.block_sizes = {2, 1};
  prob.constraints = {{{0, 1, 1, 1.0}, {1, 0, 0, 1.0}}, {{0, 1, 0, 1.0}}};
  prob.rhs = {2.0, -0.5};
  prob.objective = {{0, 0, 0, 1.0}, {1, 0, 0, 3.0}};
  const auto a = sdp_solve(prob);
  const auto b = sdp_solve(prob);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Putinar, Examples) {
  const auto g = putinar_lower_bound(P("x1 - x1^2", 1), 2);
  ASSERT_TRUE(g.converged());
  EXPECT_NEAR(*g.mu, 0.0, 1e-6);
  EXPECT_TRUE(g.verification.ok);

  const auto q = putinar_lower_bound(P("x1^2 - x1 + 1", 1), 2);
  ASSERT_TRUE(q.converged());
  EXPECT_NEAR(*q.mu, 0.75, 1e-6);
  EXPECT_LE(q.lower_bound(), 0.75);

  const auto xy = putinar_lower_bound(P("x1*x2", 2), 2);
  ASSERT_TRUE(xy.converged());
  EXPECT_NEAR(*xy.mu, -0.125, 1e-6);

  EXPECT_THROW(putinar_lower_bound(P("x1^3", 1), 2), std::invalid_argument);
  EXPECT_THROW(putinar_lower_bound(P("x1", 1), 1), std::invalid_argument);
}

TEST(Schmudgen, Examples) {
  const auto a = schmudgen_lower_bound(P("x1", 1), 1);
  ASSERT_TRUE(a.converged());
  EXPECT_NEAR(*a.mu, 0.0, 1e-6);
  const auto b = schmudgen_lower_bound(P("x1^2 - x1 + 1", 1), 2);
  ASSERT_TRUE(b.converged());
  EXPECT_NEAR(*b.mu, 0.75, 1e-6);
  EXPECT_TRUE(b.verification.ok);
  const auto c = schmudgen_lower_bound(P("x1 - x1^2", 1), 2);
  ASSERT_TRUE(c.converged());
  EXPECT_NEAR(*c.mu, 0.0, 1e-6);
  EXPECT_THROW(schmudgen_lower_bound(P("x1", 4), 2), std::invalid_argument);
}

TEST(Membership, Examples) {
  EXPECT_EQ(check_membership(P("x1 - x1^2", 1), 2).outcome, MembershipResult::Outcome::feasible);
  const auto yes = check_membership(P("x1*x2 + 1/8", 2), 2);
  EXPECT_EQ(yes.outcome, MembershipResult::Outcome::feasible);
  ASSERT_TRUE(yes.certificate);
  EXPECT_TRUE(verify_qm(*yes.certificate, P("x1*x2 + 1/8", 2)).ok);
  const auto no = check_membership(P("x1*x2 + 1/8 - 1/100", 2), 2);
  EXPECT_EQ(no.outcome, MembershipResult::Outcome::infeasible);
  EXPECT_LE(no.margin, -1e-6);
}

TEST(MinConstant, Examples) {
  const auto two = min_constant(2, 2);
  ASSERT_EQ(two.status, SdpStatus::optimal);
  EXPECT_NEAR(two.value, 0.125, 1e-5);
  const auto four = min_constant(2, 4);
  ASSERT_EQ(four.status, SdpStatus::optimal);
  EXPECT_LE(four.value, two.value + 1e-7);
  const auto again = min_constant(2, 2);
  EXPECT_NEAR(again.value, two.value, 1e-9);
}

TEST(VerifyQm, ExactAndPerturbed) {
  QuadraticModuleCertificate cert = zero_certificate(1, 2);
  cert.sigmas[0] = exact_sos(1, {{0}}, {{Rational(1)}});
  const auto ok = verify_qm(cert, P("x1 - x1^2", 1));
  EXPECT_TRUE(ok.ok);
  EXPECT_EQ(ok.status, CertificateStatus::exact);
  EXPECT_TRUE(ok.residual.is_zero());

  QuadraticModuleCertificate sq = zero_certificate(1, 2);
  sq.mu = Rational(3, 4);
  sq.sigma0 = exact_sos(1, {{0}, {1}}, {{Rational(1, 4), Rational(-1, 2)}, {Rational(-1, 2), Rational(1)}});
  EXPECT_TRUE(verify_qm(sq, P("x1^2 - x1 + 1", 1)).ok);
  auto bad = sq;
  (*bad.sigma0.exact_gram)[0][1] += 1;
  (*bad.sigma0.exact_gram)[1][0] += 1;
  const auto rep = verify_qm(bad, P("x1^2 - x1 + 1", 1));
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.residual, P("2*x1", 1));
}

TEST(Rationalize, RecoversSimpleSquare) {
  const auto p = P("x1^2 - x1 + 1", 1);
  const auto res = putinar_lower_bound(p, 2);
  ASSERT_TRUE(res.converged());
  const auto exact = rationalize_certificate(res.certificate, p);
  ASSERT_TRUE(exact);
  EXPECT_TRUE(exact->is_exact());
  const auto rep = verify_qm(*exact, p);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.status, CertificateStatus::exact);
  EXPECT_EQ(exact->mu, Rational(3, 4));
}

TEST(Rationalize, NearbyDyadicGram) {
  // G has denominator 8 and is positive definite; perturb by 1e-9.
  const RationalMatrix g{{Rational(3, 8), Rational(-1, 8), Rational(1, 8)},
                         {Rational(-1, 8), Rational(5, 8), Rational(0)},
                         {Rational(1, 8), Rational(0), Rational(7, 8)}};
  const auto exact = exact_sos(2, {{0, 0}, {1, 0}, {0, 1}}, g);
  ASSERT_TRUE(is_psd_exact(g));
  const Rational mu(1, 3);
  const Polynomial p = exact.expand() + Polynomial(2, mu);

  QuadraticModuleCertificate cert = zero_certificate(2, 2);
  cert.mu = from_double(to_double(mu) + 1e-9);
  cert.sigma0 = exact;
  cert.sigma0.exact_gram.reset();
  for (Eigen::Index a = 0; a < 3; ++a) {
    for (Eigen::Index b = 0; b < 3; ++b) cert.sigma0.gram(a, b) += 1e-9 * ((a + 2 * b) % 3 == 0 ? 1 : -1) * (a == b ? 1 : 0.5);
  }
  cert.sigma0.gram = 0.5 * (cert.sigma0.gram + cert.sigma0.gram.transpose()).eval();
  const auto out = rationalize_certificate(cert, p);
  ASSERT_TRUE(out);
  EXPECT_TRUE(verify_qm(*out, p).ok);
  EXPECT_LE(mu - out->mu, Rational(1, 100000000));
  EXPECT_GE(out->mu + Rational(1, 100000000), mu);
}

TEST(Rationalize, IndefiniteFails) {
  QuadraticModuleCertificate cert = zero_certificate(1, 2);
  cert.sigma0 = exact_sos(1, {{0}, {1}}, {{Rational(1), Rational(2)}, {Rational(2), Rational(1)}});
  cert.sigma0.exact_gram.reset();
  const Polynomial p = P("1 + 4*x1 + x1^2", 1);
  EXPECT_FALSE(rationalize_certificate(cert, p));
  EXPECT_FALSE(is_psd_exact({{Rational(1), Rational(2)}, {Rational(2), Rational(1)}}));
}

TEST(SosProperty, MonotoneAndSandwiched) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    auto p = cubecert::testing::random_small(2, 2, rng);
    if (p.degree() < 1) continue;
    const double upper = round_up(reference_min(p, Rational(1, 1000)).hi);
    double previous = -1e300;
    for (int r : {2, 4, 6}) {
      const auto put = putinar_lower_bound(p, r);
      ASSERT_TRUE(put.converged()) << p.to_string() << " r=" << r;
      EXPECT_TRUE(put.verification.ok);
      EXPECT_GE(*put.mu, previous - 2e-6);
      EXPECT_LE(put.lower_bound(), upper + 1e-6);
      previous = *put.mu;
    }
    const auto han = handelman_lower_bound(p, 2);
    const auto sch = schmudgen_lower_bound(p, 2);
    ASSERT_TRUE(sch.converged());
    EXPECT_LE(to_double(*han.mu), *sch.mu + sch.gap + 1e-6);
    EXPECT_LE(sch.lower_bound(), upper + 1e-6);
  }
}

TEST(SosProperty, RecoversConstructedConstant) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int trial = 0; trial < 5; ++trial) {
    // p = (a + b x1 + c x2)^2 + (d + e x1)^2 g_1 + f^2 g_2 + const
    Polynomial lin = Polynomial(2, c(rng)) + scale(P("x1", 2), c(rng)) + scale(P("x2", 2), c(rng));
    Polynomial lin2 = Polynomial(2, c(rng)) + scale(P("x1", 2), c(rng));
    const Rational k(c(rng), 4);
    const int f = c(rng);
    const Polynomial p = lin * lin + lin2 * lin2 * box_generator(2, 0) + scale(box_generator(2, 1), f * f) +
                         Polynomial(2, k);
    const auto res = putinar_lower_bound(p, 4);
    ASSERT_TRUE(res.converged());
    EXPECT_GE(*res.mu, to_double(k) - 1e-6) << p.to_string();
  }
}
