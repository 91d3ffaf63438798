#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cubecert/bounds.hpp"
#include "cubecert/oracle.hpp"
#include "cubecert/polynomial.hpp"
#include "cubecert/sdp.hpp"

namespace cubecert {

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::size_t size = 50;
  std::size_t num_vars = 2;
  int degree = 2;
  int coefficient_bound = 5;
};

/// Integer coefficients uniform in [-bound, bound] on every monomial of degree
/// <= m; redrawn while zero.
Polynomial random_polynomial(std::size_t num_vars, int degree, int coefficient_bound, std::mt19937_64& rng);
/// Fully determined by the config.
std::vector<Polynomial> random_suite(const SuiteConfig& config);

/// Workers for `jobs` tasks: hardware concurrency, capped by CUBECERT_THREADS.
unsigned worker_count(std::size_t jobs);

struct ValidationConfig {
  SuiteConfig suite;
  std::vector<int> orders{4, 8, 16};
  Rational oracle_width{1, 1000};
  /// Slack for comparisons that involve floating SDP values.
  double tolerance = 1e-6;
  bool handelman = true;
  bool putinar = true;
};

struct ValidationRow {
  std::size_t instance = 0;
  int order = 0;
  Polynomial polynomial{1};
  Rational L;
  Enclosure pmin;
  Enclosure pmax;
  std::optional<Rational> p_han;
  /// mu - gap of the converged Putinar relaxation.
  std::optional<double> p_put;
  SdpStatus put_status = SdpStatus::numerical_failure;
  BoundValue han_error;
  BoundValue put_error;
  /// Names of failed checks: han_error, put_error, han_above_min, put_above_min.
  std::vector<std::string> violations;
  bool solver_failure = false;
};

/// One row per (instance, order), ordered by instance then order regardless
/// of the thread count.
std::vector<ValidationRow> run_validation(const ValidationConfig& config);
std::vector<ValidationRow> run_validation(const std::vector<Polynomial>& suite, const ValidationConfig& config);

/// Header plus one line per row; an empty row list gives an empty string.
std::string render_csv(const std::vector<ValidationRow>& rows);

}  // namespace cubecert
