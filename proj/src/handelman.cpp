#include "cubecert/handelman.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <stdexcept>

namespace cubecert {

Polynomial HandelmanBasisElement::expand() const {
  if (h.size() != k.size()) throw DimensionMismatch("h and k must have the same length");
  const std::size_t n = h.size();
  Polynomial result(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] == 0 && k[i] == 0) continue;
    // x^h (1-x)^k = sum_j C(k,j) (-1)^j x^(h+j)
    Polynomial factor(n);
    ExponentVector e(n, 0);
    for (int j = 0; j <= k[i]; ++j) {
      e[i] = h[i] + j;
      Rational c(binomial(static_cast<unsigned>(k[i]), static_cast<unsigned>(j)));
      factor.add_term(e, j % 2 == 0 ? c : Rational(-c));
    }
    result = result * factor;
  }
  return result;
}

namespace {

// Shifted Chebyshev coefficients of x^h (1-x)^k, cached by (h, k).
class UnivariateChebyshev {
 public:
  explicit UnivariateChebyshev(int order) : order_(order) {}

  const std::vector<Rational>& get(int h, int k) {
    const auto key = std::make_pair(h, k);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<Rational> v(static_cast<std::size_t>(order_) + 1);
    v[0] = 1;
    for (int i = 0; i < h; ++i) v = times_x(v);
    for (int i = 0; i < k; ++i) {
      const auto xv = times_x(v);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= xv[j];
    }
    return cache_.emplace(key, std::move(v)).first->second;
  }

 private:
  // x = (1 + t) / 2 with t T_j = (T_{j+1} + T_{j-1}) / 2 and t T_0 = T_1.
  static std::vector<Rational> times_x(const std::vector<Rational>& v) {
    std::vector<Rational> out(v.size());
    const Rational half(1, 2);
    const Rational quarter(1, 4);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0) continue;
      out[j] += v[j] * half;
      if (j + 1 < v.size()) out[j + 1] += v[j] * (j == 0 ? half : quarter);
      if (j > 0) out[j - 1] += v[j] * quarter;
    }
    return out;
  }

  int order_;
  std::map<std::pair<int, int>, std::vector<Rational>> cache_;
};

}  // namespace

std::vector<HandelmanBasisElement> enumerate_handelman_basis(std::size_t num_vars, int order) {
  std::vector<HandelmanBasisElement> basis;
  for (const ExponentVector& hk : monomial_basis(2 * num_vars, order)) {
    basis.push_back({ExponentVector(hk.begin(), hk.begin() + static_cast<std::ptrdiff_t>(num_vars)),
                     ExponentVector(hk.begin() + static_cast<std::ptrdiff_t>(num_vars), hk.end())});
  }
  return basis;
}

HandelmanResult handelman_lower_bound(const Polynomial& p, int order, const LpOptions& options) {
  if (order < p.degree()) {
    throw std::invalid_argument("Handelman order " + std::to_string(order) + " is below deg(p) = " +
                                std::to_string(p.degree()));
  }
  const std::size_t n = p.num_vars();
  const auto basis = enumerate_handelman_basis(n, order);

  // Coefficients are matched in the shifted Chebyshev basis
  // T*_a(x) = prod_i T_{a_i}(2 x_i - 1) rather than over monomials. The
  // feasible set is the same, but the constraint matrix is far better
  // conditioned and its exact inverse has much smaller entries.
  // mu is eliminated through the T*_0 row: maximizing mu is minimizing the
  // T*_0 coefficient of sum lambda q^k.
  std::map<ExponentVector, std::size_t, GradedLexLess> row_of;
  for (const auto& e : monomial_basis(n, order)) {
    if (total_degree(e) > 0) row_of.emplace(e, row_of.size());
  }
  UnivariateChebyshev table(order);
  auto expand_product = [&](const std::vector<const std::vector<Rational>*>& factors) {
    std::map<ExponentVector, Rational, GradedLexLess> out;
    ExponentVector a(n, 0);
    auto rec = [&](auto&& self, std::size_t i, const Rational& c) -> void {
      if (i == n) {
        out[a] += c;
        return;
      }
      const auto& f = *factors[i];
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (f[j] == 0) continue;
        a[i] = static_cast<int>(j);
        self(self, i + 1, c * f[j]);
      }
      a[i] = 0;
    };
    rec(rec, 0, Rational(1));
    return out;
  };

  LinearProgram lp;
  lp.num_rows = row_of.size();
  lp.rhs.assign(lp.num_rows, Rational(0));
  Rational p_zero = 0;
  for (const auto& [e, c] : p.terms()) {
    std::vector<const std::vector<Rational>*> factors(n);
    for (std::size_t i = 0; i < n; ++i) factors[i] = &table.get(e[i], 0);
    for (const auto& [a, v] : expand_product(factors)) {
      if (total_degree(a) > 0) lp.rhs[row_of.at(a)] += c * v;
      else p_zero += c * v;
    }
  }
  lp.columns.reserve(basis.size());
  lp.cost.reserve(basis.size());
  // Only products of degree exactly r enter the LP. Any lower product is a
  // nonnegative combination of them (multiply by x_1 + (1 - x_1) = 1), so the
  // cone and the optimum are unchanged while the LP shrinks several times.
  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& element = basis[j];
    if (order > 0 && element.degree() != order) continue;
    used.push_back(j);
    std::vector<const std::vector<Rational>*> factors(n);
    for (std::size_t i = 0; i < n; ++i) factors[i] = &table.get(element.h[i], element.k[i]);
    std::vector<SparseEntry> column;
    Rational cost = 0;
    for (const auto& [a, v] : expand_product(factors)) {
      if (v == 0) continue;
      if (total_degree(a) > 0) column.push_back({row_of.at(a), v});
      else cost = v;
    }
    std::sort(column.begin(), column.end(), [](const SparseEntry& x, const SparseEntry& y) { return x.row < y.row; });
    lp.columns.push_back(std::move(column));
    lp.cost.push_back(std::move(cost));
  }

  HandelmanResult result;
  result.lp = solve_lp(lp, options);
  result.certificate.order = order;
  result.certificate.num_vars = n;
  if (result.lp.status == LpStatus::infeasible) return result;
  if (result.lp.status != LpStatus::optimal) {
    throw std::runtime_error(std::string("Handelman LP did not reach optimality: ") + to_string(result.lp.status));
  }
  const Rational mu = p_zero - result.lp.objective;
  result.mu = mu;
  result.certificate.mu = mu;
  for (std::size_t j = 0; j < used.size(); ++j) {
    if (result.lp.x[j] != 0) result.certificate.terms.emplace_back(basis[used[j]], result.lp.x[j]);
  }
  return result;
}

VerificationReport verify_handelman(const HandelmanCertificate& cert, const Polynomial& p) {
  VerificationReport report;
  report.residual = Polynomial(p.num_vars());
  if (cert.num_vars != p.num_vars()) {
    report.diagnostic = "certificate and polynomial have different variable counts";
    return report;
  }
  Polynomial sum(p.num_vars(), cert.mu);
  std::string problems;
  for (const auto& [element, lambda] : cert.terms) {
    if (element.h.size() != p.num_vars() || element.k.size() != p.num_vars()) {
      report.diagnostic = "basis element has wrong length";
      return report;
    }
    if (lambda < 0) problems += "negative lambda " + to_string(lambda) + "; ";
    if (element.degree() > cert.order) problems += "element exceeds order; ";
    sum += element.expand() * lambda;
  }
  report.residual = sum - p;
  if (!report.residual.is_zero()) problems += "identity residual " + report.residual.to_string() + "; ";
  report.ok = problems.empty();
  report.diagnostic = report.ok ? "exact" : problems;
  return report;
}

}  // namespace cubecert
