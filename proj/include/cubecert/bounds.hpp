#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubecert/oracle.hpp"
#include "cubecert/rational.hpp"

namespace cubecert {

struct BoundCondition {
  std::string text;
  bool holds = true;
};

/// A bound value together with the preconditions under which it is claimed.
/// `value` never under-reports: transcendental parts are rounded upward.
/// `exact` is set when the value is rational and known exactly.
struct BoundValue {
  double value = 0.0;
  std::optional<Rational> exact;
  std::vector<BoundCondition> conditions;

  bool valid() const;
};

/// m^3 n^(m+1) L / (6 r); needs r >= m n.
BoundValue schmudgen_error(int m, int n, const Rational& L, int r);
/// (3/2) L / log2(r) C(m+1,3) n^(m+1) + range / (r+2). Flags r >= m and
/// r >= max(m, 2^n) separately. Throws std::domain_error for r < 2.
BoundValue putinar_error(int m, int n, const Rational& L, int r, const Rational& range);
/// ceil(exp(m^3 n^(m+1) L / pmin)); flagged invalid (value +inf) unless pmin > 0.
BoundValue putinar_degree(int m, int n, const Rational& L, const Rational& pmin);
/// c exp((m^2 n^m L / pmin)^c).
BoundValue ns_degree(int m, int n, const Rational& L, const Rational& pmin, double c = 1.0);
/// 6 m^3 n^(2m) L / (log(r/c))^(1/c); flags r >= c exp((2 m^2 n^m)^c).
BoundValue ns_error(int m, int n, const Rational& L, double r, double c = 1.0);
/// n ((1 - eps)^2 + 1)^2 / 4, flagged unless 0 < eps < 1.
BoundValue archimedean_M(int n, const Rational& epsilon);

struct PmaxUpper {
  Rational geometric;  // L (n^(m+1) - 1)/(n - 1), or L (m + 1) for n = 1
  Rational coarse;     // L n^(m+1)
};
PmaxUpper pmax_upper(const Rational& L, int m, int n);

struct BoundInputs {
  int m = 1;
  int n = 1;
  Rational L = 1;
  int r = 1;
  Enclosure pmin;
  Enclosure pmax;
  double c = 1.0;
};

/// One cell of the comparison table: representation x parameter x column.
struct TableCell {
  std::string representation;  // schmudgen | putinar
  std::string parameter;       // degree | error
  std::string column;          // quadratic | general | ns
  std::string formula;
  BoundValue bound;
};

struct BoundReport {
  BoundInputs inputs;
  std::vector<TableCell> cells;
  /// The theorem-form Putinar error and degree, next to the table entries.
  BoundValue putinar_error_theorem;
  BoundValue putinar_degree_theorem;
  BoundValue schmudgen_error_general;
  PmaxUpper pmax_bound;
  /// Named ratios between forms that the table and the theorems state
  /// differently.
  std::vector<std::pair<std::string, double>> notes;
};

/// Degree bounds use pmin.lo and errors use the range pmax.hi - pmin.lo, so
/// the enclosures only ever make the reported values larger.
BoundReport bound_table(const BoundInputs& inputs);

std::string render_text(const BoundReport& report);
std::string render_json(const BoundReport& report);

}  // namespace cubecert
