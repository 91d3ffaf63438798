#include "cubecert/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cubecert/handelman.hpp"
#include "cubecert/io.hpp"
#include "cubecert/sos.hpp"

namespace cubecert {

Polynomial random_polynomial(std::size_t num_vars, int degree, int coefficient_bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-coefficient_bound, coefficient_bound);
  const auto basis = monomial_basis(num_vars, degree);
  while (true) {
    Polynomial p(num_vars);
    for (const auto& e : basis) p.add_term(e, coeff(rng));
    if (!p.is_zero()) return p;
  }
}

std::vector<Polynomial> random_suite(const SuiteConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::vector<Polynomial> out;
  out.reserve(config.size);
  for (std::size_t i = 0; i < config.size; ++i) {
    out.push_back(random_polynomial(config.num_vars, config.degree, config.coefficient_bound, rng));
  }
  return out;
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CUBECERT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

namespace {

std::vector<ValidationRow> validate_instance(std::size_t index, const Polynomial& p, const ValidationConfig& config) {
  const int m = std::max(p.degree(), 1);
  const int n = static_cast<int>(p.num_vars());
  const Rational L = l_norm(p);
  const Enclosure pmin = reference_min(p, config.oracle_width);
  const Enclosure pmax = reference_max(p, config.oracle_width);
  const Rational range = std::max(Rational(0), Rational(pmax.lo - pmin.hi));

  std::vector<ValidationRow> rows;
  for (int r : config.orders) {
    ValidationRow row;
    row.instance = index;
    row.order = r;
    row.polynomial = p;
    row.L = L;
    row.pmin = pmin;
    row.pmax = pmax;
    row.han_error = schmudgen_error(m, n, L, r);
    if (r >= 2) row.put_error = putinar_error(m, n, L, r, range);
    else row.put_error = {std::numeric_limits<double>::infinity(), {}, {{"r >= 2", false}}};

    if (config.handelman) {
      const auto han = handelman_lower_bound(p, r);
      if (han.mu) {
        row.p_han = *han.mu;
        if (row.han_error.valid() && pmin.hi - *han.mu > *row.han_error.exact) row.violations.push_back("han_error");
        if (*han.mu > pmin.hi) row.violations.push_back("han_above_min");
      } else {
        row.solver_failure = true;
      }
    }
    if (config.putinar && r >= 2) {
      const auto put = putinar_lower_bound(p, r);
      row.put_status = put.status;
      if (put.converged() && put.mu) {
        const double v = put.lower_bound();
        row.p_put = v;
        if (row.put_error.valid() && round_up(pmin.hi) - v > row.put_error.value + config.tolerance) row.violations.push_back("put_error");
        if (v > round_up(pmin.hi) + config.tolerance) row.violations.push_back("put_above_min");
      } else {
        row.solver_failure = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace

std::vector<ValidationRow> run_validation(const ValidationConfig& config) {
  return run_validation(random_suite(config.suite), config);
}

std::vector<ValidationRow> run_validation(const std::vector<Polynomial>& suite, const ValidationConfig& config) {
  std::vector<std::vector<ValidationRow>> per_instance(suite.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= suite.size()) return;
      try {
        per_instance[i] = validate_instance(i, suite[i], config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned workers = worker_count(suite.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<ValidationRow> rows;
  for (auto& block : per_instance) {
    for (auto& row : block) rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_csv(const std::vector<ValidationRow>& rows) {
  if (rows.empty()) return {};
  std::ostringstream out;
  out << "format_version,instance,r,polynomial,L,pmin_lo,pmin_hi,pmax_lo,pmax_hi,p_han,p_put,put_status,"
         "han_error_bound,put_error_bound,violations\n";
  for (const auto& row : rows) {
    std::string violations;
    for (const auto& v : row.violations) violations += (violations.empty() ? "" : ";") + v;
    out << kFormatVersion << ',' << row.instance << ',' << row.order << ',' << quoted(row.polynomial.to_string())
        << ',' << to_string(row.L) << ',' << to_string(row.pmin.lo) << ',' << to_string(row.pmin.hi) << ','
        << to_string(row.pmax.lo) << ',' << to_string(row.pmax.hi) << ','
        << (row.p_han ? to_string(*row.p_han) : "") << ',' << (row.p_put ? number(*row.p_put) : "") << ','
        << to_string(row.put_status) << ',' << to_string(*row.han_error.exact) << ','
        << number(row.put_error.value) << ',' << violations << '\n';
  }
  return out.str();
}

}  // namespace cubecert
