#include "cubecert/certificates.hpp"

#include <stdexcept>
#include <vector>

namespace cubecert {

Rational c_constant(int n) {
  if (n < 1) throw std::invalid_argument("C_n is defined for n >= 1");
  if (n == 1) return 0;
  if (n % 2 == 1) return c_constant(n + 1);
  return Rational(1, static_cast<unsigned long>(n) * static_cast<unsigned long>(n + 2));
}

Rational c_prime(int n) {
  if (n < 0) throw std::invalid_argument("C_n' is defined for n >= 0");
  Rational s = 0;
  for (int i = 1; i <= n; ++i) s += c_constant(i);
  return s;
}

Polynomial product_target(std::size_t n, const Rational& constant) {
  return Polynomial::monomial(ExponentVector(n, 1)) + Polynomial(n, constant);
}

Polynomial chain_target(std::size_t n) {
  return Polynomial(n, 1 + c_prime(static_cast<int>(n))) - Polynomial::monomial(ExponentVector(n, 1));
}

Polynomial monomial_product_target(const ExponentVector& h, const ExponentVector& k) {
  const int t = total_degree(h) + total_degree(k);
  return Polynomial(h.size(), 1 + c_prime(t)) - HandelmanBasisElement{h, k}.expand();
}

QuadraticModuleCertificate even_product_certificate(std::size_t n, int order, const Rational& constant,
                                                    const SosOptions& options) {
  const Polynomial target = product_target(n, constant);
  MembershipResult m = check_membership(target, order, options);
  if (m.outcome != MembershipResult::Outcome::feasible || !m.certificate) {
    throw std::runtime_error("membership of " + target.to_string() + " at order " + std::to_string(order) +
                             " not established (" + to_string(m.outcome) + ", best constant shift " +
                             std::to_string(m.best_mu) + ")");
  }
  m.certificate->construction = "sdp";
  return *m.certificate;
}

QuadraticModuleCertificate even_product_certificate(std::size_t n, int order, const SosOptions& options) {
  return even_product_certificate(n, order, c_constant(static_cast<int>(n)), options);
}

QuadraticModuleCertificate odd_from_even(const QuadraticModuleCertificate& even, double tol) {
  const std::size_t n = even.num_vars;
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("odd_from_even needs a certificate in an even number of variables");
  const QmReport check = verify_qm(even, product_target(n, c_constant(static_cast<int>(n))), tol);
  if (!check.ok) throw std::invalid_argument("input certificate does not verify: " + check.diagnostic);
  std::vector<VariableImage> images;
  for (std::size_t i = 0; i + 1 < n; ++i) images.push_back(VariableImage::var(i));
  images.push_back(VariableImage::constant_one());
  QuadraticModuleCertificate out = map_certificate(even, images, n - 1);
  out.construction = "instantiation";
  return out;
}

QuadraticModuleCertificate product_certificate(std::size_t n, const SosOptions& options) {
  if (n == 0) throw std::invalid_argument("product certificate needs n >= 1");
  if (n == 1) {
    // x_1 = x_1^2 + g_1
    QuadraticModuleCertificate c = zero_certificate(1, 2);
    c.sigma0 = exact_sos(1, {ExponentVector{1}}, RationalMatrix{{Rational(1)}});
    c.sigmas[0] = exact_sos(1, {ExponentVector{0}}, RationalMatrix{{Rational(1)}});
    c.construction = "chain";
    return c;
  }
  if (n % 2 == 0) return even_product_certificate(n, static_cast<int>(n), options);
  return odd_from_even(even_product_certificate(n + 1, static_cast<int>(n + 1), options));
}

QuadraticModuleCertificate chain_certificate(std::size_t n, const SosOptions& options) {
  if (n == 0) throw std::invalid_argument("chain certificate needs n >= 1");
  // 1 - x_1 = (1 - x_1)^2 + g_1
  QuadraticModuleCertificate cert = zero_certificate(1, 2);
  cert.sigma0 = exact_sos(1, {ExponentVector{0}, ExponentVector{1}},
                          RationalMatrix{{Rational(1), Rational(-1)}, {Rational(-1), Rational(1)}});
  cert.sigmas[0] = exact_sos(1, {ExponentVector{0}}, RationalMatrix{{Rational(1)}});
  for (std::size_t m = 2; m <= n; ++m) {
    std::vector<VariableImage> embed;
    for (std::size_t i = 0; i + 1 < m; ++i) embed.push_back(VariableImage::var(i));
    const auto prev = map_certificate(cert, embed, m);
    std::vector<VariableImage> flip = embed;
    flip.push_back(VariableImage::one_minus(m - 1));
    const auto step = map_certificate(product_certificate(m, options), flip, m);
    cert = add_certificates(prev, step);
  }
  cert.construction = "chain";
  if (!cert.is_exact()) {
    if (auto exact = rationalize_certificate(cert, chain_target(n))) cert = std::move(*exact);
  }
  return cert;
}

QuadraticModuleCertificate monomial_product_certificate(const ExponentVector& h, const ExponentVector& k,
                                                        const SosOptions& options) {
  if (h.size() != k.size() || h.empty()) throw DimensionMismatch("h and k must have the same positive length");
  const std::size_t n = h.size();
  const int t = total_degree(h) + total_degree(k);
  if (t == 0) {
    QuadraticModuleCertificate zero = zero_certificate(n, 0);
    zero.construction = "chain";
    return zero;
  }
  std::vector<VariableImage> images;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < h[i]; ++j) images.push_back(VariableImage::var(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < k[i]; ++j) images.push_back(VariableImage::one_minus(i));
  }
  QuadraticModuleCertificate out = map_certificate(chain_certificate(static_cast<std::size_t>(t), options), images, n);
  out.construction = "chain";
  return out;
}

QmReport verify_construction(const QuadraticModuleCertificate& cert, const Polynomial& target, double tol) {
  return verify_qm(cert, target, tol);
}

}  // namespace cubecert
