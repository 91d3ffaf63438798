#pragma once

#include <cstddef>
#include <vector>

#include "cubecert/rational.hpp"

namespace cubecert {

struct SparseEntry {
  std::size_t row;
  Rational value;
};

/// minimize cost^T x  subject to  A x = rhs,  x >= 0.
/// A is stored column-wise.
struct LinearProgram {
  std::size_t num_rows = 0;
  std::vector<std::vector<SparseEntry>> columns;
  std::vector<Rational> cost;
  std::vector<Rational> rhs;

  std::size_t num_cols() const { return columns.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded, pivot_limit };

struct LpOptions {
  std::size_t max_pivots = 200000;
  /// Try the optimal basis of a perturbed double-precision solve first and
  /// accept it only if exact rational arithmetic confirms optimality.
  bool float_warm_start = true;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational objective;
  std::vector<Rational> x;      // primal solution, one per column
  std::vector<Rational> duals;  // y with A^T y <= cost at optimality
  std::size_t pivots = 0;
};

/// Exact LP solve. A floating basis is certified by fraction-free integer
/// solves for x_B and y; failing that, a two-phase revised simplex over the
/// rationals runs with Dantzig pricing, switching to Bland's rule after a run
/// of degenerate pivots so it cannot cycle. The returned solution satisfies
/// A x = rhs exactly, x >= 0, and reduced costs are exactly nonnegative when
/// status is optimal.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

const char* to_string(LpStatus status);

}  // namespace cubecert
