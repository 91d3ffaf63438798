#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace cubecert {

/// One entry of a block-diagonal symmetric matrix. Only row >= col is stored;
/// an off-diagonal entry stands for both (row, col) and (col, row).
struct BlockEntry {
  std::size_t block;
  std::size_t row;
  std::size_t col;
  double value;
};

using SparseSymmetric = std::vector<BlockEntry>;

/// Primal:  minimize <C, X>  s.t.  <A_k, X> = b_k,  X block-diagonal PSD.
/// Dual:    maximize b^T y   s.t.  C - sum_k y_k A_k = Z  PSD.
struct SdpProblem {
  std::vector<std::size_t> block_sizes;
  std::vector<SparseSymmetric> constraints;
  std::vector<double> rhs;
  SparseSymmetric objective;

  std::size_t num_constraints() const { return constraints.size(); }
};

enum class SdpStatus { optimal, primal_infeasible, dual_infeasible, max_iterations, numerical_failure };

const char* to_string(SdpStatus status);

struct SdpOptions {
  double gap_tol = 1e-8;       // relative duality gap
  double feasibility_tol = 1e-9;
  double infeasibility_tol = 1e-8;  // ray test for infeasibility detection
  int max_iterations = 120;
  double step_fraction = 0.98;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  std::vector<Eigen::MatrixXd> x;
  std::vector<Eigen::MatrixXd> z;
  Eigen::VectorXd y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;

  bool converged() const { return status == SdpStatus::optimal; }
};

/// Infeasible-start primal-dual path-following method (HKM search direction,
/// Mehrotra predictor-corrector). Deterministic for fixed options.
SdpSolution sdp_solve(const SdpProblem& problem, const SdpOptions& options = {});

}  // namespace cubecert
