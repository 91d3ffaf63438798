#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubecert/handelman.hpp"
#include "cubecert/polynomial.hpp"
#include "cubecert/sdp.hpp"

namespace cubecert {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Internal basis for Gram matrices. Shifted Chebyshev products
/// T*_a(x) = prod_i T_{a_i}(2 x_i - 1) keep the SDP far better conditioned
/// than monomials at high order, and since |T*_a| <= 1 on [0,1]^n their
/// coefficient sums bound a polynomial's magnitude on the cube.
enum class SosBasis { monomial, chebyshev };
const char* to_string(SosBasis basis);

/// sigma = phi^T G phi where phi_a is the basis polynomial with multi-index
/// basis[a] in the given family. The floating Gram is always present; the
/// rational one only after rounding or for exact constructions, and then it
/// is authoritative.
struct SosPolynomial {
  std::size_t num_vars = 1;
  SosBasis family = SosBasis::monomial;
  std::vector<ExponentVector> basis;
  Eigen::MatrixXd gram;
  std::optional<RationalMatrix> exact_gram;

  bool empty() const { return basis.empty(); }
  bool is_exact() const { return exact_gram.has_value(); }
  int degree() const;
  /// Exact monomial expansion; floating entries are converted exactly from
  /// double.
  Polynomial expand() const;
  double min_eigenvalue() const;
};

/// The basis polynomial phi_a of a family, in monomials.
Polynomial basis_polynomial(SosBasis family, const ExponentVector& index);
/// Re-expresses the Gram over monomials (G' = U^T G U). Exact blocks stay
/// exact; floating ones lose accuracy as the degree grows.
SosPolynomial to_monomial_family(const SosPolynomial& s);

SosPolynomial zero_sos(std::size_t num_vars);
/// A rational Gram matrix on the given basis (the floating copy is filled in).
SosPolynomial exact_sos(std::size_t num_vars, std::vector<ExponentVector> basis, RationalMatrix gram);
/// Union basis, Gram matrices embedded and summed.
SosPolynomial add_sos(const SosPolynomial& a, const SosPolynomial& b);
SosPolynomial scale_sos(const SosPolynomial& s, const Rational& c);
/// Both operate over monomials, converting Chebyshev blocks first.
/// sigma(phi(x)) for an affine variable map phi. The Gram is transported as
/// T^T G T where row a of T holds the image of basis monomial a.
SosPolynomial map_sos(const SosPolynomial& s, std::span<const VariableImage> images, std::size_t new_num_vars);

/// Exact PSD test by symmetric elimination.
bool is_psd_exact(const RationalMatrix& m);

enum class CertificateStatus { exact, floating, failed };
const char* to_string(CertificateStatus status);

/// mu + sigma_0 + sum_i sigma_i g_i with g_i = x_i - x_i^2.
struct QuadraticModuleCertificate {
  int order = 0;
  std::size_t num_vars = 1;
  Rational mu;
  SosPolynomial sigma0;
  std::vector<SosPolynomial> sigmas;
  std::string construction = "sdp";

  bool is_exact() const;
  Polynomial expand() const;
};

/// mu + sum_kappa sigma_kappa x^h (1-x)^k over squarefree products.
struct PreorderingCertificate {
  struct Term {
    HandelmanBasisElement product;
    SosPolynomial sigma;
  };
  int order = 0;
  std::size_t num_vars = 1;
  Rational mu;
  std::vector<Term> terms;

  bool is_exact() const;
  Polynomial expand() const;
};

QuadraticModuleCertificate zero_certificate(std::size_t num_vars, int order = 0);
QuadraticModuleCertificate add_certificates(const QuadraticModuleCertificate& a, const QuadraticModuleCertificate& b);
/// Composes with an affine variable map. g_j goes to the generator of its
/// image variable; a multiplier whose variable is sent to 1 drops out since
/// g(1) = 0.
QuadraticModuleCertificate map_certificate(const QuadraticModuleCertificate& cert,
                                           std::span<const VariableImage> images, std::size_t new_num_vars);

struct SosOptions {
  SdpOptions sdp;
  SosBasis basis = SosBasis::chebyshev;
  double verify_tol = 1e-6;
};

struct QmReport {
  bool ok = false;
  CertificateStatus status = CertificateStatus::failed;
  /// Residual coefficients are measured in the certificate's own basis
  /// family (Chebyshev if any block uses it).
  SosBasis family = SosBasis::monomial;
  double max_residual = 0.0;
  double residual_l1 = 0.0;
  double min_eigenvalue = 0.0;
  Polynomial residual{1};
  std::string diagnostic;
};

/// Checks every block PSD (exactly for rational blocks, min eigenvalue >= -tol
/// otherwise) and that the identity residual vanishes (exactly, or
/// coefficient-wise <= tol when any block is floating). `residual` is always
/// the monomial form.
QmReport verify_qm(const QuadraticModuleCertificate& cert, const Polynomial& p, double tol = 1e-6);
QmReport verify_preordering(const PreorderingCertificate& cert, const Polynomial& p, double tol = 1e-6);

template <class Certificate>
struct SosBoundResult {
  /// Empty when the relaxation has no feasible mu at this order.
  std::optional<double> mu;
  double gap = 0.0;
  SdpStatus status = SdpStatus::numerical_failure;
  int iterations = 0;
  Certificate certificate;
  QmReport verification;

  bool converged() const { return status == SdpStatus::optimal; }
  /// mu minus the final duality gap; the value reported as the bound.
  double lower_bound() const { return mu ? *mu - gap : -std::numeric_limits<double>::infinity(); }
};

using PutinarResult = SosBoundResult<QuadraticModuleCertificate>;
using SchmudgenResult = SosBoundResult<PreorderingCertificate>;

/// p_put^(r): sup mu with p - mu = sigma_0 + sum sigma_i g_i, deg sigma_0 <= r,
/// deg sigma_i g_i <= r.
PutinarResult putinar_lower_bound(const Polynomial& p, int order, const SosOptions& options = {});
/// p_sch^(r) over the squarefree products of x_i and 1 - x_i; n <= 3.
SchmudgenResult schmudgen_lower_bound(const Polynomial& p, int order, const SosOptions& options = {});

struct MembershipResult {
  enum class Outcome { feasible, infeasible, unknown };
  Outcome outcome = Outcome::unknown;
  /// Largest c with f - c in M_r found by the solver.
  double best_mu = 0.0;
  /// Upper bound on that c read off the dual solution; at most -1e-6
  /// separates f from M_r.
  double margin = 0.0;
  std::optional<QuadraticModuleCertificate> certificate;
  QmReport verification;
};
const char* to_string(MembershipResult::Outcome outcome);

/// Is f in M_r(g)? Infeasible only with a dual separation margin of at least
/// 1e-6.
MembershipResult check_membership(const Polynomial& f, int order, const SosOptions& options = {});

struct MinConstantResult {
  double value = 0.0;
  double gap = 0.0;
  SdpStatus status = SdpStatus::numerical_failure;
  QuadraticModuleCertificate certificate;
};
/// Smallest c with x_1 ... x_n + c in M_r(g).
MinConstantResult min_constant(std::size_t num_vars, int order, const SosOptions& options = {});

/// Works over monomials (Chebyshev blocks are converted first). Rounds every
/// Gram entry to a rational with denominator at most the bound, pushes the
/// exact non-constant residual into sigma_0, absorbs the constant residual (a
/// deficit lowers mu), and accepts only if every block is exactly PSD.
/// Denominator bounds are tried in the order given.
std::optional<QuadraticModuleCertificate> rationalize_certificate(const QuadraticModuleCertificate& cert,
                                                                  const Polynomial& p,
                                                                  std::span<const std::int64_t> denominator_bounds);
std::optional<QuadraticModuleCertificate> rationalize_certificate(const QuadraticModuleCertificate& cert,
                                                                  const Polynomial& p);

}  // namespace cubecert
