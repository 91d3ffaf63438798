#include "cubecert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace cubecert {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
    case LpStatus::pivot_limit:
      return "pivot_limit";
  }
  return "unknown";
}

namespace {

class ExactSimplex {
 public:
  ExactSimplex(const LinearProgram& lp, std::vector<int> row_sign)
      : lp_(lp), m_(lp.num_rows), n_(lp.num_cols()), row_sign_(std::move(row_sign)) {
    rhs_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) rhs_[i] = row_sign_[i] < 0 ? Rational(-lp.rhs[i]) : lp.rhs[i];
  }

  void cold_start() {
    binv_.assign(m_, std::vector<Rational>(m_));
    for (std::size_t i = 0; i < m_; ++i) binv_[i][i] = 1;
    basic_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basic_[i] = n_ + i;
    x_b_ = rhs_;
    refresh_membership();
  }

  bool has_positive_artificial() const {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] >= n_ && x_b_[i] != 0) return true;
    }
    return false;
  }

  enum class Outcome { optimal, unbounded, pivot_limit };

  Outcome run(bool phase_one, std::size_t max_pivots) {
    std::vector<Rational> y(m_);
    std::vector<Rational> u(m_);
    Rational reduced;
    while (true) {
      compute_duals(phase_one, y);
      // Dantzig pricing while progress is made; Bland after a run of
      // degenerate pivots, which rules out cycling.
      const bool bland = degenerate_run_ >= kDegenerateLimit;
      std::size_t entering = n_;
      Rational best;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        reduced = phase_one ? Rational(0) : lp_.cost[j];
        for (const auto& e : lp_.columns[j]) {
          if (y[e.row] != 0) reduced -= y[e.row] * signed_value(e);
        }
        if (reduced < 0 && (entering == n_ || reduced < best)) {
          entering = j;
          best = reduced;
          if (bland) break;
        }
      }
      if (entering == n_) return Outcome::optimal;
      if (pivots_ >= max_pivots) return Outcome::pivot_limit;

      column_in_basis(entering, u);
      std::size_t leave = m_;
      Rational best_ratio;
      Rational ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        if (u[i] <= 0) continue;
        ratio = x_b_[i] / u[i];
        if (leave == m_ || ratio < best_ratio || (ratio == best_ratio && basic_[i] < basic_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == m_) return Outcome::unbounded;
      degenerate_run_ = best_ratio == 0 ? degenerate_run_ + 1 : 0;
      pivot(leave, entering, u);
    }
  }

  // Pivots zero-level artificials out of the basis where a structural column
  // allows it; remaining ones sit on redundant rows.
  void drive_out_artificials() {
    Rational entry;
    for (std::size_t p = 0; p < m_; ++p) {
      if (basic_[p] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        entry = 0;
        for (const auto& e : lp_.columns[j]) {
          if (binv_[p][e.row] != 0) entry += binv_[p][e.row] * signed_value(e);
        }
        if (entry != 0) {
          std::vector<Rational> u(m_);
          column_in_basis(j, u);
          pivot(p, j, u);
          break;
        }
      }
    }
  }

  Rational phase_one_objective() const {
    Rational s = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] >= n_) s += x_b_[i];
    }
    return s;
  }

  void fill_result(LpResult& result) const {
    result.x.assign(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] < n_) result.x[basic_[i]] = x_b_[i];
    }
    result.objective = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (result.x[j] != 0) result.objective += lp_.cost[j] * result.x[j];
    }
    std::vector<Rational> y(m_);
    compute_duals(false, y);
    result.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) result.duals[i] = row_sign_[i] < 0 ? Rational(-y[i]) : y[i];
    result.pivots = pivots_;
  }

 private:
  Rational signed_value(const SparseEntry& e) const {
    return row_sign_[e.row] < 0 ? Rational(-e.value) : e.value;
  }

  void refresh_membership() {
    is_basic_.assign(n_ + m_, false);
    for (std::size_t j : basic_) is_basic_[j] = true;
  }

  void compute_duals(bool phase_one, std::vector<Rational>& y) const {
    std::fill(y.begin(), y.end(), Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = basic_[i];
      Rational cb = j >= n_ ? Rational(phase_one ? 1 : 0) : (phase_one ? Rational(0) : lp_.cost[j]);
      if (cb == 0) continue;
      for (std::size_t k = 0; k < m_; ++k) {
        if (binv_[i][k] != 0) y[k] += cb * binv_[i][k];
      }
    }
  }

  void column_in_basis(std::size_t j, std::vector<Rational>& u) const {
    std::fill(u.begin(), u.end(), Rational(0));
    for (const auto& e : lp_.columns[j]) {
      const Rational v = signed_value(e);
      for (std::size_t i = 0; i < m_; ++i) {
        if (binv_[i][e.row] != 0) u[i] += binv_[i][e.row] * v;
      }
    }
  }

  void pivot(std::size_t leave, std::size_t entering, const std::vector<Rational>& u) {
    const Rational inv = 1 / u[leave];
    auto& prow = binv_[leave];
    for (auto& v : prow) {
      if (v != 0) v *= inv;
    }
    x_b_[leave] *= inv;
    Rational factor;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave || u[i] == 0) continue;
      factor = u[i];
      auto& row = binv_[i];
      for (std::size_t k = 0; k < m_; ++k) {
        if (prow[k] != 0) row[k] -= factor * prow[k];
      }
      if (x_b_[leave] != 0) x_b_[i] -= factor * x_b_[leave];
    }
    is_basic_[basic_[leave]] = false;
    is_basic_[entering] = true;
    basic_[leave] = entering;
    ++pivots_;
  }

  const LinearProgram& lp_;
  std::size_t m_;
  std::size_t n_;
  std::vector<int> row_sign_;
  std::vector<Rational> rhs_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<std::size_t> basic_;
  std::vector<bool> is_basic_;
  std::vector<Rational> x_b_;
  std::size_t pivots_ = 0;
  static constexpr std::size_t kDegenerateLimit = 50;
  std::size_t degenerate_run_ = 0;
};

// Dense-tableau simplex in double precision with Dantzig pricing. Only its
// final basis is used, and it is certified exactly afterwards, so it may fail
// or be slightly wrong without affecting correctness. The seed drives the
// rhs perturbation.
std::optional<std::vector<std::size_t>> float_basis(const LinearProgram& lp, const std::vector<int>& row_sign,
                                                    std::uint64_t seed) {
  const std::size_t m = lp.num_rows;
  const std::size_t n = lp.num_cols();
  const std::size_t width = n + m + 1;
  const std::size_t rhs_col = n + m;
  // Equilibrated copy of [A | I | b]: columns, then rows, scaled to unit
  // max norm. Only the basis is used, so scaling is harmless.
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(width));
  std::vector<double> cost(width, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double big = 0.0;
    for (const auto& e : lp.columns[j]) big = std::max(big, std::abs(to_double(e.value)));
    const double s = big > 0.0 ? 1.0 / big : 1.0;
    for (const auto& e : lp.columns[j]) full(e.row, j) = row_sign[e.row] * to_double(e.value) * s;
    cost[j] = to_double(lp.cost[j]) * s;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double big = full.row(i).head(n).cwiseAbs().maxCoeff();
    const double s = big > 0.0 ? 1.0 / big : 1.0;
    full.row(i).head(n) *= s;
    full(i, n + i) = 1.0;
    full(i, rhs_col) = row_sign[i] * to_double(lp.rhs[i]) * s;
  }
  std::vector<double> t((m + 1) * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return t[i * width + j]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < width; ++j) at(i, j) = full(i, j);
  }
  // Small positive rhs perturbation against degenerate stalling; the final
  // refactorizations use the true rhs.
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(1.0, 2.0);
    for (std::size_t i = 0; i < m; ++i) at(i, rhs_col) += 1e-7 * (1.0 + std::abs(at(i, rhs_col))) * unit(rng);
  }
  std::vector<std::size_t> basic(m);
  for (std::size_t i = 0; i < m; ++i) basic[i] = n + i;

  const double pivot_tol = 1e-9;
  const double cost_tol = 1e-12;

  auto pivot = [&](std::size_t r, std::size_t c) {
    const double inv = 1.0 / at(r, c);
    for (std::size_t j = 0; j < width; ++j) at(r, j) *= inv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      double* row = &t[i * width];
      const double* prow = &t[r * width];
      for (std::size_t j = 0; j < width; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    basic[r] = c;
  };

  std::size_t steps = 0;
  std::vector<bool> banned(n, false);
  auto iterate = [&](std::size_t allowed, std::size_t max_iter) {
    std::size_t degenerate = 0;
    for (std::size_t it = 0; it < max_iter; ++it, ++steps) {
      const bool bland = degenerate >= 50;
      std::size_t enter = allowed;
      double best = -cost_tol;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (!banned[j] && at(m, j) < best) {
          best = at(m, j);
          enter = j;
          if (bland) break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = m;
      double ratio = 0.0;
      const double tie = 1e-12;
      // Pivots far below the column's largest entry make the basis nearly
      // singular.
      double col_max = 0.0;
      for (std::size_t i = 0; i < m; ++i) col_max = std::max(col_max, std::abs(at(i, enter)));
      const double min_pivot = std::max(pivot_tol, 1e-7 * col_max);
      for (std::size_t i = 0; i < m; ++i) {
        const double a = at(i, enter);
        if (a <= min_pivot) continue;
        const double q = std::max(at(i, rhs_col), 0.0) / a;
        bool better = leave == m || q < ratio - tie;
        if (!better && q <= ratio + tie) better = bland ? basic[i] < basic[leave] : a > at(leave, enter);
        if (better) {
          leave = i;
          ratio = q;
        }
      }
      if (leave == m) {
        // Both phases are bounded here, so this is rounding noise in the
        // column. Skip it until the next refactorization.
        banned[enter] = true;
        continue;
      }
      degenerate = ratio <= tie ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
    return false;
  };
  const std::size_t max_iter = 10 * (m + n);

  // Phase one: minimize the sum of artificials.
  for (std::size_t j = 0; j < width; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += at(i, j);
    at(m, j) = j >= n && j < rhs_col ? 0.0 : -s;
  }
  if (!iterate(n, max_iter)) return std::nullopt;
  if (-at(m, rhs_col) > 1e-4) return std::nullopt;
  for (std::size_t i = 0; i < m; ++i) {
    if (basic[i] < n) continue;
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(at(i, j)) <= pivot_tol || std::find(basic.begin(), basic.end(), j) != basic.end()) continue;
      if (best == n || std::abs(at(i, j)) > std::abs(at(i, best))) best = j;
    }
    if (best < n) pivot(i, best);
  }

  auto price = [&] {
    for (std::size_t j = 0; j < width; ++j) {
      double d = cost[j];
      for (std::size_t i = 0; i < m; ++i) {
        if (basic[i] < n && at(i, j) != 0.0) d -= cost[basic[i]] * at(i, j);
      }
      at(m, j) = d;
    }
  };
  // Rebuilds the tableau from the original data, discarding the rounding
  // error accumulated by in-place updates.
  auto refactor = [&] {
    Eigen::MatrixXd b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) b.col(i) = full.col(basic[i]);
    const Eigen::MatrixXd fresh = b.partialPivLu().solve(full);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < width; ++j) at(i, j) = fresh(i, j);
    }
  };

  // Dual simplex pivots that clear negative basic values left over after a
  // refactorization, keeping reduced costs (nearly) nonnegative.
  auto restore_feasibility = [&](std::size_t max_iter) {
    const double feas_tol = 1e-10;
    for (std::size_t it = 0; it < max_iter; ++it, ++steps) {
      std::size_t leave = m;
      double worst = -feas_tol;
      for (std::size_t i = 0; i < m; ++i) {
        if (at(i, rhs_col) < worst) {
          worst = at(i, rhs_col);
          leave = i;
        }
      }
      if (leave == m) return true;
      std::size_t enter = n;
      double ratio = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double a = at(leave, j);
        if (a >= -pivot_tol) continue;
        const double q = std::max(at(m, j), 0.0) / -a;
        if (enter == n || q < ratio || (q == ratio && a < at(leave, enter))) {
          enter = j;
          ratio = q;
        }
      }
      if (enter == n) return false;
      pivot(leave, enter);
    }
    return false;
  };

  // Phase two on the structural columns.
  for (int round = 0; round < 4; ++round) {
    steps = 0;
    if (round > 0) {
      refactor();
      price();
      if (!restore_feasibility(max_iter)) return std::nullopt;
    }
    std::fill(banned.begin(), banned.end(), false);
    price();
    if (!iterate(n, max_iter)) return std::nullopt;
    if (round > 0 && steps == 0) break;
  }
  return basic;
}

// Solves M z = rhs for a square integer matrix by fraction-free elimination.
// Empty when M is singular.
std::optional<std::vector<Rational>> solve_integer_system(std::vector<std::vector<mpz_class>> a,
                                                         std::vector<mpz_class> rhs) {
  const std::size_t m = a.size();
  mpz_class prev = 1;
  mpz_class t;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t p = k;
    while (p < m && a[p][k] == 0) ++p;
    if (p == m) return std::nullopt;
    if (p != k) {
      std::swap(a[p], a[k]);
      std::swap(rhs[p], rhs[k]);
    }
    const mpz_class& akk = a[k][k];
    for (std::size_t i = k + 1; i < m; ++i) {
      const mpz_class aik = a[i][k];
      for (std::size_t j = k + 1; j < m; ++j) {
        mpz_mul(t.get_mpz_t(), akk.get_mpz_t(), a[i][j].get_mpz_t());
        mpz_submul(t.get_mpz_t(), aik.get_mpz_t(), a[k][j].get_mpz_t());
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      mpz_mul(t.get_mpz_t(), akk.get_mpz_t(), rhs[i].get_mpz_t());
      mpz_submul(t.get_mpz_t(), aik.get_mpz_t(), rhs[k].get_mpz_t());
      mpz_divexact(rhs[i].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      a[i][k] = 0;
    }
    prev = akk;
  }
  std::vector<Rational> z(m);
  Rational acc;
  for (std::size_t i = m; i-- > 0;) {
    acc = rhs[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      if (a[i][j] != 0 && z[j] != 0) acc -= a[i][j] * z[j];
    }
    z[i] = acc / a[i][i];
  }
  return z;
}

mpz_class denominator_lcm(const std::vector<Rational>& values) {
  mpz_class l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

// Checks exactly whether the given basis is optimal. The basic solution and
// duals come from two integer solves against B and B^T, which is much cheaper
// than building B^-1 when the entries grow large.
std::optional<LpResult> certify_basis(const LinearProgram& lp, const std::vector<std::size_t>& basis) {
  const std::size_t m = lp.num_rows;
  const std::size_t n = lp.num_cols();
  if (basis.size() != m) return std::nullopt;

  // Column i of M is basic column i scaled to integers by scale[i].
  std::vector<mpz_class> scale(m, 1);
  std::vector<std::vector<mpz_class>> cols(m, std::vector<mpz_class>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = basis[i];
    if (j >= n) {
      if (j - n >= m) return std::nullopt;
      cols[i][j - n] = 1;
      continue;
    }
    for (const auto& e : lp.columns[j]) mpz_lcm(scale[i].get_mpz_t(), scale[i].get_mpz_t(), e.value.get_den_mpz_t());
    for (const auto& e : lp.columns[j]) cols[i][e.row] += mpz_class(e.value * scale[i]);
  }

  std::vector<std::vector<mpz_class>> rows(m, std::vector<mpz_class>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) rows[k][i] = cols[i][k];
  }
  const mpz_class rhs_scale = denominator_lcm(lp.rhs);
  std::vector<mpz_class> b(m);
  for (std::size_t k = 0; k < m; ++k) b[k] = mpz_class(lp.rhs[k] * rhs_scale);
  auto z = solve_integer_system(std::move(rows), std::move(b));
  if (!z) return std::nullopt;

  LpResult result;
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    Rational v = (*z)[i] * scale[i] / rhs_scale;
    if (v < 0) return std::nullopt;
    if (basis[i] >= n) {
      if (v != 0) return std::nullopt;
      continue;
    }
    result.x[basis[i]] = std::move(v);
  }

  std::vector<Rational> cb(m);
  for (std::size_t i = 0; i < m; ++i) cb[i] = basis[i] < n ? Rational(lp.cost[basis[i]] * scale[i]) : Rational(0);
  const mpz_class cost_scale = denominator_lcm(cb);
  std::vector<mpz_class> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = mpz_class(cb[i] * cost_scale);
  auto y = solve_integer_system(std::move(cols), std::move(c));
  if (!y) return std::nullopt;
  for (auto& v : *y) v /= cost_scale;

  std::vector<bool> is_basic(n, false);
  for (std::size_t j : basis) {
    if (j < n) is_basic[j] = true;
  }
  Rational reduced;
  for (std::size_t j = 0; j < n; ++j) {
    if (is_basic[j]) continue;
    reduced = lp.cost[j];
    for (const auto& e : lp.columns[j]) {
      if ((*y)[e.row] != 0) reduced -= (*y)[e.row] * e.value;
    }
    if (reduced < 0) return std::nullopt;
  }

  result.status = LpStatus::optimal;
  result.objective = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (result.x[j] != 0) result.objective += lp.cost[j] * result.x[j];
  }
  result.duals = std::move(*y);
  return result;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
  if (lp.cost.size() != lp.num_cols()) throw std::invalid_argument("cost vector length differs from column count");
  if (lp.rhs.size() != lp.num_rows) throw std::invalid_argument("rhs length differs from row count");
  for (const auto& col : lp.columns) {
    for (const auto& e : col) {
      if (e.row >= lp.num_rows) throw std::out_of_range("constraint entry row out of range");
    }
  }

  std::vector<int> row_sign(lp.num_rows, 1);
  for (std::size_t i = 0; i < lp.num_rows; ++i) row_sign[i] = lp.rhs[i] < 0 ? -1 : 1;

  LpResult result;
  ExactSimplex simplex(lp, row_sign);
  // A few perturbed floating solves usually find an optimal basis that the
  // exact check accepts. Otherwise the exact simplex starts from scratch:
  // starting it from a rejected basis was measured to need more pivots.
  if (options.float_warm_start) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto basis = float_basis(lp, row_sign, seed);
      if (!basis) continue;
      if (auto certified = certify_basis(lp, *basis)) return std::move(*certified);
    }
  }
  simplex.cold_start();

  if (simplex.has_positive_artificial()) {
    const auto outcome = simplex.run(true, options.max_pivots);
    if (outcome == ExactSimplex::Outcome::pivot_limit) {
      result.status = LpStatus::pivot_limit;
      simplex.fill_result(result);
      return result;
    }
    if (simplex.phase_one_objective() > 0) {
      result.status = LpStatus::infeasible;
      simplex.fill_result(result);
      return result;
    }
  }
  simplex.drive_out_artificials();
  const auto outcome = simplex.run(false, options.max_pivots);
  switch (outcome) {
    case ExactSimplex::Outcome::optimal:
      result.status = LpStatus::optimal;
      break;
    case ExactSimplex::Outcome::unbounded:
      result.status = LpStatus::unbounded;
      break;
    case ExactSimplex::Outcome::pivot_limit:
      result.status = LpStatus::pivot_limit;
      break;
  }
  simplex.fill_result(result);
  return result;
}

}  // namespace cubecert
