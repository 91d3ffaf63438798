#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubecert/lp.hpp"
#include "cubecert/polynomial.hpp"

namespace cubecert {

/// The product x^h (1 - x)^k.
struct HandelmanBasisElement {
  ExponentVector h;
  ExponentVector k;

  int degree() const { return total_degree(h) + total_degree(k); }
  Polynomial expand() const;
  bool operator==(const HandelmanBasisElement&) const = default;
};

/// Every (h, k) with |h| + |k| <= r, graded lexicographic on (h, k); the
/// empty product comes first.
std::vector<HandelmanBasisElement> enumerate_handelman_basis(std::size_t num_vars, int order);

/// Witness of p - mu = sum lambda_{h,k} x^h (1-x)^k with lambda >= 0.
struct HandelmanCertificate {
  int order = 0;
  std::size_t num_vars = 0;
  Rational mu;
  std::vector<std::pair<HandelmanBasisElement, Rational>> terms;
};

struct HandelmanResult {
  /// Empty when no representation exists at this order.
  std::optional<Rational> mu;
  HandelmanCertificate certificate;
  LpResult lp;
};

/// p_han^(r) = sup { mu : p - mu in H_r }, solved exactly. Throws
/// std::invalid_argument when r < deg(p).
HandelmanResult handelman_lower_bound(const Polynomial& p, int order, const LpOptions& options = {});

struct VerificationReport {
  bool ok = false;
  Polynomial residual{1};
  std::string diagnostic;
};

/// Exact check: all lambda >= 0, degrees within the order, and the expansion
/// reproduces p - mu. The residual is (sum lambda q^k + mu) - p.
VerificationReport verify_handelman(const HandelmanCertificate& cert, const Polynomial& p);

}  // namespace cubecert
