#include "cubecert/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cubecert {

const char* to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::primal_infeasible:
      return "primal_infeasible";
    case SdpStatus::dual_infeasible:
      return "dual_infeasible";
    case SdpStatus::max_iterations:
      return "max_iterations";
    case SdpStatus::numerical_failure:
      return "numerical_failure";
  }
  return "unknown";
}

namespace {

using Blocks = std::vector<Eigen::MatrixXd>;

Blocks zeros(const std::vector<std::size_t>& sizes) {
  Blocks out;
  out.reserve(sizes.size());
  for (std::size_t s : sizes) {
    const auto n = static_cast<Eigen::Index>(s);
    out.push_back(Eigen::MatrixXd::Zero(n, n));
  }
  return out;
}

Blocks scaled_identity(const std::vector<std::size_t>& sizes, double s) {
  Blocks out;
  out.reserve(sizes.size());
  for (std::size_t n : sizes) {
    const auto k = static_cast<Eigen::Index>(n);
    out.push_back(s * Eigen::MatrixXd::Identity(k, k));
  }
  return out;
}

// <A, W> for symmetric A and an arbitrary (possibly nonsymmetric) W.
double inner(const SparseSymmetric& a, const Blocks& w) {
  double sum = 0.0;
  for (const auto& e : a) {
    const auto i = static_cast<Eigen::Index>(e.row);
    const auto j = static_cast<Eigen::Index>(e.col);
    const auto& m = w[e.block];
    sum += e.row == e.col ? e.value * m(i, i) : e.value * (m(i, j) + m(j, i));
  }
  return sum;
}

void add_scaled(Blocks& out, const SparseSymmetric& a, double s) {
  if (s == 0.0) return;
  for (const auto& e : a) {
    const auto i = static_cast<Eigen::Index>(e.row);
    const auto j = static_cast<Eigen::Index>(e.col);
    out[e.block](i, j) += s * e.value;
    if (i != j) out[e.block](j, i) += s * e.value;
  }
}

double frobenius(const Blocks& m) {
  double s = 0.0;
  for (const auto& b : m) s += b.squaredNorm();
  return std::sqrt(s);
}

double frobenius(const SparseSymmetric& a) {
  double s = 0.0;
  for (const auto& e : a) s += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
  return std::sqrt(s);
}

double trace_product(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k].array() * b[k].array()).sum();
  return s;
}

// Largest alpha with m + alpha * d PSD, given the Cholesky factor of m.
double max_step(const std::vector<Eigen::LLT<Eigen::MatrixXd>>& chol, const Blocks& d) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k].size() == 0) continue;
    const auto& l = chol[k].matrixL();
    Eigen::MatrixXd t = l.solve(d[k]);
    t = l.solve(t.transpose()).transpose();
    t = 0.5 * (t + t.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

class Solver {
 public:
  Solver(const SdpProblem& problem, const SdpOptions& options) : p_(problem), opt_(options) {
    m_ = problem.num_constraints();
    if (problem.rhs.size() != m_) throw std::invalid_argument("SDP rhs length differs from constraint count");
    auto check = [&](const SparseSymmetric& a) {
      for (const auto& e : a) {
        if (e.block >= problem.block_sizes.size() || e.row >= problem.block_sizes[e.block] ||
            e.col > e.row) {
          throw std::invalid_argument("SDP entry outside its block or above the diagonal");
        }
      }
    };
    for (const auto& a : problem.constraints) check(a);
    check(problem.objective);
    for (std::size_t s : problem.block_sizes) total_dim_ += s;
    b_ = Eigen::Map<const Eigen::VectorXd>(problem.rhs.data(), static_cast<Eigen::Index>(m_));
    c_ = zeros(problem.block_sizes);
    add_scaled(c_, problem.objective, 1.0);
  }

  SdpSolution run() {
    SdpSolution sol;
    const double n = static_cast<double>(std::max<std::size_t>(total_dim_, 1));
    double max_a = 0.0;
    double xi = std::max(10.0, std::sqrt(n));
    for (std::size_t k = 0; k < m_; ++k) {
      const double na = frobenius(p_.constraints[k]);
      max_a = std::max(max_a, na);
      xi = std::max(xi, std::sqrt(n) * (1.0 + std::abs(b_(static_cast<Eigen::Index>(k)))) / (1.0 + na));
    }
    const double c_norm = frobenius(c_);
    const double eta = std::max({10.0, std::sqrt(n), c_norm, max_a});
    x_ = scaled_identity(p_.block_sizes, xi);
    z_ = scaled_identity(p_.block_sizes, eta);
    y_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
    const double b_norm = b_.norm();

    for (int iter = 0;; ++iter) {
      sol.iterations = iter;
      const Eigen::VectorXd rp = b_ - apply_a(x_);
      Blocks rd = c_;
      for (std::size_t k = 0; k < rd.size(); ++k) rd[k] -= z_[k];
      for (std::size_t k = 0; k < m_; ++k) add_scaled(rd, p_.constraints[k], -y_(static_cast<Eigen::Index>(k)));
      const double pobj = trace_product(c_, x_);
      const double dobj = b_.dot(y_);
      sol.primal_objective = pobj;
      sol.dual_objective = dobj;
      sol.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      sol.primal_infeasibility = rp.norm() / (1.0 + b_norm);
      sol.dual_infeasibility = frobenius(rd) / (1.0 + c_norm);
      store(sol);

      if (sol.relative_gap <= opt_.gap_tol && sol.primal_infeasibility <= opt_.feasibility_tol &&
          sol.dual_infeasibility <= opt_.feasibility_tol) {
        sol.status = SdpStatus::optimal;
        return sol;
      }
      // Ray tests: C is negligible against a diverging dual (resp. primal) iterate.
      if (dobj > 0.0) {
        Blocks aty = zeros(p_.block_sizes);
        for (std::size_t k = 0; k < m_; ++k) add_scaled(aty, p_.constraints[k], y_(static_cast<Eigen::Index>(k)));
        for (std::size_t k = 0; k < aty.size(); ++k) aty[k] += z_[k];
        if (frobenius(aty) / dobj < opt_.infeasibility_tol) {
          sol.status = SdpStatus::primal_infeasible;
          return sol;
        }
      }
      if (pobj < 0.0 && apply_a(x_).norm() / -pobj < opt_.infeasibility_tol) {
        sol.status = SdpStatus::dual_infeasible;
        return sol;
      }
      if (iter >= opt_.max_iterations) {
        sol.status = SdpStatus::max_iterations;
        return sol;
      }

      if (!factor_iterates() || !build_schur()) {
        sol.status = SdpStatus::numerical_failure;
        return sol;
      }
      const double mu = trace_product(x_, z_) / n;

      // Predictor.
      Blocks rc = zeros(p_.block_sizes);
      for (std::size_t k = 0; k < rc.size(); ++k) rc[k] = -x_[k];
      Blocks dx, dz;
      Eigen::VectorXd dy;
      direction(rp, rd, rc, dx, dy, dz);
      double ap = std::min(1.0, opt_.step_fraction * max_step(x_chol_, dx));
      double ad = std::min(1.0, opt_.step_fraction * max_step(z_chol_, dz));
      double mu_aff = 0.0;
      for (std::size_t k = 0; k < x_.size(); ++k) {
        mu_aff += ((x_[k] + ap * dx[k]).array() * (z_[k] + ad * dz[k]).array()).sum();
      }
      mu_aff /= n;
      const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

      // Corrector with the second-order term.
      for (std::size_t k = 0; k < rc.size(); ++k) {
        rc[k] = sigma * mu * z_inv_[k] - x_[k] - dx[k] * dz[k] * z_inv_[k];
      }
      direction(rp, rd, rc, dx, dy, dz);
      ap = std::min(1.0, opt_.step_fraction * max_step(x_chol_, dx));
      ad = std::min(1.0, opt_.step_fraction * max_step(z_chol_, dz));
      for (std::size_t k = 0; k < x_.size(); ++k) {
        x_[k] += ap * dx[k];
        z_[k] += ad * dz[k];
      }
      y_ += ad * dy;
      if (ap < 1e-12 && ad < 1e-12) {
        sol.status = SdpStatus::numerical_failure;
        return sol;
      }
    }
  }

 private:
  Eigen::VectorXd apply_a(const Blocks& w) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(m_));
    for (std::size_t k = 0; k < m_; ++k) out(static_cast<Eigen::Index>(k)) = inner(p_.constraints[k], w);
    return out;
  }

  void store(SdpSolution& sol) const {
    sol.x = x_;
    sol.z = z_;
    sol.y = y_;
  }

  bool factor_iterates() {
    x_chol_.clear();
    z_chol_.clear();
    z_inv_.clear();
    for (std::size_t k = 0; k < x_.size(); ++k) {
      x_chol_.emplace_back(x_[k]);
      z_chol_.emplace_back(z_[k]);
      if (x_chol_.back().info() != Eigen::Success || z_chol_.back().info() != Eigen::Success) return false;
      const auto s = static_cast<Eigen::Index>(p_.block_sizes[k]);
      Eigen::MatrixXd inv = z_chol_.back().solve(Eigen::MatrixXd::Identity(s, s));
      z_inv_.push_back(0.5 * (inv + inv.transpose()));
    }
    return true;
  }

  // M_kl = tr(A_k X A_l Z^-1).
  bool build_schur() {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd schur(m, m);
    Blocks g = zeros(p_.block_sizes);
    std::vector<bool> touched(p_.block_sizes.size());
    for (std::size_t l = 0; l < m_; ++l) {
      std::fill(touched.begin(), touched.end(), false);
      for (const auto& e : p_.constraints[l]) {
        auto& gb = g[e.block];
        if (!touched[e.block]) {
          gb.setZero();
          touched[e.block] = true;
        }
        const auto i = static_cast<Eigen::Index>(e.row);
        const auto j = static_cast<Eigen::Index>(e.col);
        gb.noalias() += e.value * x_[e.block].col(i) * z_inv_[e.block].row(j);
        if (i != j) gb.noalias() += e.value * x_[e.block].col(j) * z_inv_[e.block].row(i);
      }
      for (std::size_t k = 0; k < m_; ++k) {
        double s = 0.0;
        for (const auto& e : p_.constraints[k]) {
          if (!touched[e.block]) continue;
          const auto i = static_cast<Eigen::Index>(e.row);
          const auto j = static_cast<Eigen::Index>(e.col);
          const auto& gb = g[e.block];
          s += i == j ? e.value * gb(i, i) : e.value * (gb(i, j) + gb(j, i));
        }
        schur(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = s;
      }
    }
    schur = 0.5 * (schur + schur.transpose());
    schur_chol_.compute(schur);
    if (schur_chol_.info() == Eigen::Success) return true;
    const double reg = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
    schur.diagonal().array() += reg;
    schur_chol_.compute(schur);
    return schur_chol_.info() == Eigen::Success;
  }

  // dX = Rc - X dZ Z^-1 (symmetrized), dZ = Rd - A^T dy, A(dX) = rp.
  void direction(const Eigen::VectorXd& rp, const Blocks& rd, const Blocks& rc, Blocks& dx, Eigen::VectorXd& dy,
                 Blocks& dz) const {
    Blocks w = rc;
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= x_[k] * rd[k] * z_inv_[k];
    const Eigen::VectorXd rhs = rp - apply_a(w);
    dy = schur_chol_.solve(rhs);
    dz = rd;
    for (std::size_t k = 0; k < m_; ++k) add_scaled(dz, p_.constraints[k], -dy(static_cast<Eigen::Index>(k)));
    dx = rc;
    for (std::size_t k = 0; k < dx.size(); ++k) {
      dx[k] -= x_[k] * dz[k] * z_inv_[k];
      dx[k] = 0.5 * (dx[k] + dx[k].transpose()).eval();
    }
  }

  const SdpProblem& p_;
  SdpOptions opt_;
  std::size_t m_ = 0;
  std::size_t total_dim_ = 0;
  Eigen::VectorXd b_;
  Blocks c_;
  Blocks x_, z_, z_inv_;
  Eigen::VectorXd y_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> x_chol_, z_chol_;
  Eigen::LLT<Eigen::MatrixXd> schur_chol_;
};

}  // namespace

SdpSolution sdp_solve(const SdpProblem& problem, const SdpOptions& options) {
  return Solver(problem, options).run();
}

}  // namespace cubecert
