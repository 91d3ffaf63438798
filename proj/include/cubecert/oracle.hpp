#pragma once

#include "cubecert/bernstein.hpp"
#include "cubecert/polynomial.hpp"

namespace cubecert {

/// Rigorous interval for p_min or p_max over [0,1]^n.
struct Enclosure {
  enum class Method { grid, bernstein };

  Rational lo;
  Rational hi;
  Method method = Method::bernstein;
  int effort = 0;        // final Bernstein / grid degree d
  bool converged = true;  // false when the effort cap stopped refinement

  Rational width() const { return hi - lo; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};

/// min over k in [d]_0^n of p(k/d): an upper bound on p_min.
Rational grid_upper_bound_on_min(const Polynomial& p, int degree);

/// Largest degree the refinement may reach: 512 for n <= 2, 64 for n = 3,
/// 16 beyond.
int enclosure_effort_cap(std::size_t num_vars);

/// [min Bernstein coefficient, min grid value], doubling d until the width is
/// at most `width_tol` or the effort cap is hit.
Enclosure reference_min(const Polynomial& p, const Rational& width_tol);
Enclosure reference_max(const Polynomial& p, const Rational& width_tol);

}  // namespace cubecert
