#pragma once

#include <cstddef>
#include <vector>

#include "cubecert/polynomial.hpp"

namespace cubecert {

/// P_{d,k}(x) = prod_i C(d, k_i) x_i^k_i (1 - x_i)^(d - k_i), expanded in the
/// monomial basis.
Polynomial bernstein_basis(int degree, const ExponentVector& k);

/// B_d(p) = sum over the grid [d]_0^n of p(k/d) P_{d,k}.
Polynomial bernstein_approx(const Polynomial& p, int degree);

/// Checks sum_k P_{d,k} = 1 and sum_k prod_i C(d, k_i) = 2^(nd), exactly.
bool partition_of_unity_check(int degree, std::size_t num_vars);

/// Coefficients of p in the tensor Bernstein basis of per-variable degree d,
/// stored densely in mixed radix (x1 index varies slowest).
class BernsteinExpansion {
 public:
  BernsteinExpansion(int degree, std::size_t num_vars, std::vector<Rational> coefficients);

  int degree() const { return degree_; }
  std::size_t num_vars() const { return num_vars_; }
  const std::vector<Rational>& coefficients() const { return coefficients_; }
  const Rational& at(const ExponentVector& k) const;

  /// Back to the monomial basis.
  Polynomial to_polynomial() const;

 private:
  int degree_;
  std::size_t num_vars_;
  std::vector<Rational> coefficients_;
};

BernsteinExpansion to_bernstein_basis(const Polynomial& p, int degree);

struct RationalInterval {
  Rational lo;
  Rational hi;
};

/// [min_k b_k, max_k b_k] over the degree-d Bernstein coefficients; contains
/// the range of p over [0,1]^n.
RationalInterval coefficient_enclosure(const Polynomial& p, int degree);

/// Values p(k/d) on the whole grid [d]_0^n, same layout as BernsteinExpansion.
std::vector<Rational> grid_values(const Polynomial& p, int degree);

/// Visits every k in [d]_0^n in the mixed-radix order used above.
template <class Visitor>
void for_each_grid_point(int degree, std::size_t num_vars, Visitor&& visit) {
  ExponentVector k(num_vars, 0);
  while (true) {
    visit(static_cast<const ExponentVector&>(k));
    std::size_t i = num_vars;
    while (i > 0) {
      --i;
      if (k[i] < degree) {
        ++k[i];
        break;
      }
      k[i] = 0;
      if (i == 0) return;
    }
    if (num_vars == 0) return;
  }
}

}  // namespace cubecert
