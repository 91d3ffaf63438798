#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cubecert/rational.hpp"

namespace cubecert {

/// Exponents (k_1, ..., k_n) of a monomial x_1^k_1 ... x_n^k_n.
using ExponentVector = std::vector<int>;

int total_degree(const ExponentVector& exponents);

/// All k with |k| <= degree in graded order; count C(n + d, d).
std::vector<ExponentVector> monomial_basis(std::size_t num_vars, int degree);

/// Graded order: lower total degree first; within a degree, x1 before x2
/// (descending lexicographic on the exponent vector). Gives [1, x1, x2, x1^2, ...].
struct GradedLexLess {
  bool operator()(const ExponentVector& a, const ExponentVector& b) const;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Image of one variable under an affine variable map: the constant 1, another
/// variable x_i, or 1 - x_i. These are the only maps the certificate
/// constructions need, and each one sends x - x^2 to a generator or to zero.
struct VariableImage {
  enum class Kind { one, variable, one_minus_variable };
  Kind kind = Kind::variable;
  std::size_t index = 0;

  static VariableImage constant_one() { return {Kind::one, 0}; }
  static VariableImage var(std::size_t i) { return {Kind::variable, i}; }
  static VariableImage one_minus(std::size_t i) { return {Kind::one_minus_variable, i}; }
};

/// Sparse multivariate polynomial with exact rational coefficients. Zero
/// coefficients are never stored; the zero polynomial has no terms and
/// degree -1.
class Polynomial {
 public:
  using Terms = std::map<ExponentVector, Rational, GradedLexLess>;

  explicit Polynomial(std::size_t num_vars);
  Polynomial(std::size_t num_vars, const Rational& constant);

  static Polynomial variable(std::size_t num_vars, std::size_t index);
  static Polynomial monomial(const ExponentVector& exponents, const Rational& coefficient = 1);

  std::size_t num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  Rational coefficient(const ExponentVector& exponents) const;
  Rational constant_term() const;

  /// Adds c * x^exponents, dropping the term if it cancels.
  void add_term(const ExponentVector& exponents, const Rational& coefficient);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial operator-() const;

  bool operator==(const Polynomial& other) const = default;

  Polynomial pow(unsigned exponent) const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  /// Replaces x_var by `replacement` (which must have the same num_vars or be
  /// constant).
  Polynomial substitute(std::size_t var, const Polynomial& replacement) const;

  /// Composes with an affine variable map: old variable j becomes images[j],
  /// expressed in `new_num_vars` variables.
  Polynomial map_variables(std::span<const VariableImage> images, std::size_t new_num_vars) const;

  /// Text form accepted by parse_polynomial.
  std::string to_string() const;

 private:
  void check_same_dimension(const Polynomial& other) const;

  std::size_t num_vars_;
  Terms terms_;
};

Polynomial scale(const Polynomial& p, const Rational& c);

/// Parses e.g. `3/2*x1^2*x2 - x3 + 1/8`. Variables are x1..xn.
Polynomial parse_polynomial(std::string_view text, std::size_t num_vars);

/// L(p) = max over terms of |p_k| * k! / |k|!. Throws std::domain_error on zero.
Rational l_norm(const Polynomial& p);

/// The generator g_i = x_i - x_i^2 (0-based i).
Polynomial box_generator(std::size_t num_vars, std::size_t index);

}  // namespace cubecert
