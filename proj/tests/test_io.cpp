#include <gtest/gtest.h>

#include "cubecert/certificates.hpp"
#include "cubecert/harness.hpp"
#include "cubecert/io.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace cubecert;
using cubecert::testing::P;

TEST(Io, HandelmanRoundTrip) {
  const auto p = P("x1^2 - x1 + 1", 1);
  const auto res = handelman_lower_bound(p, 2);
  const auto text = handelman_to_json(res.certificate);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["format_version"], 1);
  EXPECT_EQ(j["mu"], "1/2");
  EXPECT_EQ(j["order"], 2);
  ASSERT_TRUE(j["terms"].is_array());
  EXPECT_TRUE(j["terms"][0].contains("lambda"));
  const auto back = handelman_from_json(text);
  EXPECT_EQ(back.mu, res.certificate.mu);
  EXPECT_EQ(back.terms, res.certificate.terms);
  EXPECT_TRUE(verify_handelman(back, p).ok);
  EXPECT_THROW(handelman_from_json("{}"), std::invalid_argument);
  EXPECT_THROW(handelman_from_json("not json"), std::invalid_argument);
}

TEST(Io, ExactQmRoundTrip) {
  const auto cert = chain_certificate(2);
  const auto text = qm_certificate_to_json(cert, CertificateStatus::exact);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["verified"], "exact");
  EXPECT_EQ(j["construction"], "chain");
  EXPECT_EQ(j["sigma0"]["gram"][1].size(), 2u);
  const auto back = qm_certificate_from_json(text);
  EXPECT_TRUE(back.is_exact());
  const auto rep = verify_qm(back, chain_target(2));
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.status, CertificateStatus::exact);
}

TEST(Io, FloatQmRoundTrip) {
  const auto p = P("x1*x2 - x1 + 1/3", 2);
  const auto res = putinar_lower_bound(p, 4);
  ASSERT_TRUE(res.converged());
  const auto text = qm_certificate_to_json(res.certificate, res.verification.status);
  EXPECT_NE(text.find("\"family\": \"chebyshev\""), std::string::npos);
  const auto back = qm_certificate_from_json(text);
  const auto rep = verify_qm(back, p);
  EXPECT_TRUE(rep.ok) << rep.diagnostic;
  EXPECT_EQ(qm_certificate_to_json(back, rep.status), text);
}

TEST(Io, Preordering) {
  const auto res = schmudgen_lower_bound(P("x1^2 - x1 + 1", 1), 2);
  const auto j = nlohmann::json::parse(preordering_to_json(res.certificate, res.verification.status));
  EXPECT_EQ(j["kind"], "preordering");
  EXPECT_EQ(j["terms"].size(), res.certificate.terms.size());
}

TEST(Harness, RandomSuite) {
  SuiteConfig cfg;
  cfg.size = 20;
  const auto a = random_suite(cfg);
  const auto b = random_suite(cfg);
  ASSERT_EQ(a.size(), 20u);
  EXPECT_EQ(a, b);
  for (const auto& p : a) {
    EXPECT_FALSE(p.is_zero());
    EXPECT_LE(p.degree(), 2);
    for (const auto& [e, c] : p.terms()) {
      EXPECT_EQ(c.get_den(), 1);
      EXPECT_LE(abs(c), 5);
    }
  }
  cfg.seed = 2;
  EXPECT_NE(random_suite(cfg), a);
}

TEST(Harness, ValidationRowsAndCsv) {
  ValidationConfig cfg;
  cfg.suite.size = 2;
  cfg.orders = {4, 8};
  const auto rows = run_validation(cfg);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].instance, 0u);
  EXPECT_EQ(rows[1].order, 8);
  for (const auto& row : rows) {
    EXPECT_TRUE(row.violations.empty());
    EXPECT_FALSE(row.solver_failure);
    ASSERT_TRUE(row.p_han);
    ASSERT_TRUE(row.p_put);
  }
  const auto csv = render_csv(rows);
  EXPECT_EQ(csv.rfind("format_version,instance,r,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(render_csv(run_validation(cfg)), csv);
  EXPECT_EQ(render_csv({}), "");
  cfg.suite.size = 0;
  EXPECT_TRUE(run_validation(cfg).empty());
}

TEST(Harness, ConstructedSuiteRecoversConstant) {
  std::vector<Polynomial> suite;
  std::vector<Rational> constants;
  for (int i = 0; i < 4; ++i) {
    const Rational c(i - 2, 3);
    // every term vanishes at the origin, so the minimum is exactly c
    const Polynomial lin = P("x1", 2) + scale(P("x2", 2), i);
    suite.push_back(lin * lin + scale(box_generator(2, 0), i + 1) + box_generator(2, 1) + Polynomial(2, c));
    constants.push_back(c);
  }
  ValidationConfig cfg;
  cfg.orders = {2};
  cfg.handelman = false;
  const auto rows = run_validation(suite, cfg);
  ASSERT_EQ(rows.size(), suite.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].p_put);
    EXPECT_NEAR(*rows[i].p_put, to_double(constants[i]), 1e-6);
  }
}

TEST(Harness, WorkerCount) {
  setenv("CUBECERT_THREADS", "1", 1);
  EXPECT_EQ(worker_count(100), 1u);
  unsetenv("CUBECERT_THREADS");
  EXPECT_EQ(worker_count(1), 1u);
  EXPECT_GE(worker_count(100), 1u);
}
