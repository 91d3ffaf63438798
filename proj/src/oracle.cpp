#include "cubecert/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace cubecert {

Rational grid_upper_bound_on_min(const Polynomial& p, int degree) {
  const std::vector<Rational> values = grid_values(p, degree);
  return *std::min_element(values.begin(), values.end());
}

int enclosure_effort_cap(std::size_t num_vars) {
  if (num_vars <= 2) return 512;
  if (num_vars == 3) return 64;
  return 16;
}

Enclosure reference_min(const Polynomial& p, const Rational& width_tol) {
  if (width_tol <= 0) throw std::invalid_argument("width_tol must be positive");
  if (p.degree() <= 0) {
    const Rational c = p.constant_term();
    return {c, c, Enclosure::Method::bernstein, 1, true};
  }
  const int cap = enclosure_effort_cap(p.num_vars());
  int d = std::max(p.degree(), 1);
  while (true) {
    const BernsteinExpansion b = to_bernstein_basis(p, d);
    Enclosure e;
    e.lo = *std::min_element(b.coefficients().begin(), b.coefficients().end());
    e.hi = grid_upper_bound_on_min(p, d);
    e.effort = d;
    e.method = Enclosure::Method::bernstein;
    if (e.width() <= width_tol) return e;
    if (2 * d > cap) {
      e.converged = false;
      return e;
    }
    d *= 2;
  }
}

Enclosure reference_max(const Polynomial& p, const Rational& width_tol) {
  Enclosure e = reference_min(-p, width_tol);
  Rational lo = -e.hi;
  Rational hi = -e.lo;
  e.lo = std::move(lo);
  e.hi = std::move(hi);
  return e;
}

}  // namespace cubecert
