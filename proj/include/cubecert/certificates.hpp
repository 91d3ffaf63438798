#pragma once

#include <cstddef>

#include "cubecert/sos.hpp"

namespace cubecert {

/// C_1 = 0, C_n = 1/(n(n+2)) for even n, C_n = C_{n+1} for odd n >= 3.
Rational c_constant(int n);
/// C_n' = C_1 + ... + C_n.
Rational c_prime(int n);

/// x_1 ... x_n + constant, the target of the product certificates.
Polynomial product_target(std::size_t n, const Rational& constant);
/// 1 - x_1 ... x_n + C_n'.
Polynomial chain_target(std::size_t n);
/// 1 - x^h (1-x)^k + C_t' with t = |h| + |k|.
Polynomial monomial_product_target(const ExponentVector& h, const ExponentVector& k);

/// Certificate for x_1 ... x_n + constant in M_r(g), found by the SDP and
/// rationalized when possible. Throws std::runtime_error when membership is
/// not established.
QuadraticModuleCertificate even_product_certificate(std::size_t n, int order, const Rational& constant,
                                                    const SosOptions& options = {});
QuadraticModuleCertificate even_product_certificate(std::size_t n, int order, const SosOptions& options = {});

/// Sets the last variable to 1. Since g(1) = 0 its multiplier disappears and
/// the result certifies the product over one variable fewer with the same
/// constant. Throws std::invalid_argument if the input does not verify
/// against x_1 ... x_n + C_n.
QuadraticModuleCertificate odd_from_even(const QuadraticModuleCertificate& even, double tol = 1e-7);

/// x_1 ... x_n + C_n: exact for n = 1, from the SDP at order n for even n,
/// and by instantiation of n + 1 for odd n >= 3.
QuadraticModuleCertificate product_certificate(std::size_t n, const SosOptions& options = {});

/// 1 - x_1 ... x_n + C_n' by induction: 1 - x_1 = (1 - x_1)^2 + g_1, then
/// each step adds the product certificate with x_n replaced by 1 - x_n.
QuadraticModuleCertificate chain_certificate(std::size_t n, const SosOptions& options = {});

/// 1 - x^h (1-x)^k + C_t' from the chain in t fresh variables, identifying
/// them with the x_i (h_i times) and with 1 - x_i (k_i times).
QuadraticModuleCertificate monomial_product_certificate(const ExponentVector& h, const ExponentVector& k,
                                                        const SosOptions& options = {});

/// Exact residual check for rational certificates, coefficient-wise <= tol
/// otherwise.
QmReport verify_construction(const QuadraticModuleCertificate& cert, const Polynomial& target, double tol = 1e-7);

}  // namespace cubecert
