#include "cubecert/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace cubecert {

int total_degree(const ExponentVector& exponents) {
  return std::accumulate(exponents.begin(), exponents.end(), 0);
}

std::vector<ExponentVector> monomial_basis(std::size_t num_vars, int degree) {
  std::vector<ExponentVector> basis;
  if (degree < 0) return basis;
  ExponentVector e(num_vars, 0);
  // Enumerate each total degree in descending lexicographic order.
  for (int d = 0; d <= degree; ++d) {
    auto fill = [&](auto&& self, std::size_t i, int remaining) -> void {
      if (i + 1 == num_vars) {
        e[i] = remaining;
        basis.push_back(e);
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        e[i] = v;
        self(self, i + 1, remaining - v);
      }
    };
    fill(fill, 0, d);
  }
  return basis;
}

bool GradedLexLess::operator()(const ExponentVector& a, const ExponentVector& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw std::invalid_argument("polynomial needs at least one variable");
}

Polynomial::Polynomial(std::size_t num_vars, const Rational& constant) : Polynomial(num_vars) {
  add_term(ExponentVector(num_vars, 0), constant);
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw std::out_of_range("variable index out of range");
  ExponentVector e(num_vars, 0);
  e[index] = 1;
  return monomial(e);
}

Polynomial Polynomial::monomial(const ExponentVector& exponents, const Rational& coefficient) {
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("negative exponent");
  }
  Polynomial p(exponents.size());
  p.add_term(exponents, coefficient);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

Rational Polynomial::coefficient(const ExponentVector& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coefficient(ExponentVector(num_vars_, 0)); }

void Polynomial::add_term(const ExponentVector& exponents, const Rational& coefficient) {
  if (exponents.size() != num_vars_) throw DimensionMismatch("exponent vector length differs from num_vars");
  if (coefficient == 0) return;
  // mpq_class(a, b) is not reduced on construction; GMP arithmetic assumes it is.
  Rational c = coefficient;
  c.canonicalize();
  auto [it, inserted] = terms_.try_emplace(exponents, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_same_dimension(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) {
    throw DimensionMismatch("polynomials have " + std::to_string(num_vars_) + " and " +
                            std::to_string(other.num_vars_) + " variables");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same_dimension(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same_dimension(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  Rational k = c;
  k.canonicalize();
  for (auto& [e, coef] : terms_) coef *= k;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same_dimension(b);
  Polynomial result(a.num_vars_);
  ExponentVector e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      result.add_term(e, ca * cb);
    }
  }
  return result;
}

Polynomial Polynomial::operator-() const {
  Polynomial result = *this;
  for (auto& [e, c] : result.terms_) c = -c;
  return result;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(num_vars_, 1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != num_vars_) throw DimensionMismatch("evaluation point has wrong length");
  Rational sum = 0;
  Rational term;
  Rational power;
  for (const auto& [e, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      mpz_pow_ui(power.get_num_mpz_t(), point[i].get_num_mpz_t(), static_cast<unsigned long>(e[i]));
      mpz_pow_ui(power.get_den_mpz_t(), point[i].get_den_mpz_t(), static_cast<unsigned long>(e[i]));
      term *= power;
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (point.size() != num_vars_) throw DimensionMismatch("evaluation point has wrong length");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c.get_d();
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::substitute(std::size_t var, const Polynomial& replacement) const {
  if (var >= num_vars_) throw std::out_of_range("substitution variable index out of range");
  Polynomial repl = replacement;
  if (replacement.num_vars_ != num_vars_) {
    if (replacement.degree() > 0) throw DimensionMismatch("replacement has incompatible num_vars");
    repl = Polynomial(num_vars_, replacement.constant_term());
  }
  std::vector<Polynomial> powers{Polynomial(num_vars_, 1)};
  Polynomial result(num_vars_);
  for (const auto& [e, c] : terms_) {
    while (static_cast<int>(powers.size()) <= e[var]) powers.push_back(powers.back() * repl);
    ExponentVector rest = e;
    rest[var] = 0;
    result += Polynomial::monomial(rest, c) * powers[static_cast<std::size_t>(e[var])];
  }
  return result;
}

Polynomial Polynomial::map_variables(std::span<const VariableImage> images, std::size_t new_num_vars) const {
  if (images.size() != num_vars_) throw DimensionMismatch("one image per variable is required");
  std::vector<Polynomial> image_polys;
  image_polys.reserve(images.size());
  for (const auto& image : images) {
    switch (image.kind) {
      case VariableImage::Kind::one:
        image_polys.emplace_back(new_num_vars, 1);
        break;
      case VariableImage::Kind::variable:
        image_polys.push_back(Polynomial::variable(new_num_vars, image.index));
        break;
      case VariableImage::Kind::one_minus_variable:
        image_polys.push_back(Polynomial(new_num_vars, 1) - Polynomial::variable(new_num_vars, image.index));
        break;
    }
  }
  Polynomial result(new_num_vars);
  for (const auto& [e, c] : terms_) {
    Polynomial term(new_num_vars, c);
    for (std::size_t j = 0; j < num_vars_; ++j) {
      if (e[j] > 0) term = term * image_polys[j].pow(static_cast<unsigned>(e[j]));
    }
    result += term;
  }
  return result;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool negative = c < 0;
    const Rational magnitude = abs(c);
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const bool constant = total_degree(e) == 0;
    bool wrote = false;
    if (constant || magnitude != 1) {
      out << cubecert::to_string(magnitude);
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) out << '*';
      out << 'x' << (i + 1);
      if (e[i] > 1) out << '^' << e[i];
      wrote = true;
    }
  }
  return out.str();
}

Polynomial scale(const Polynomial& p, const Rational& c) { return p * c; }

namespace {

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, std::size_t num_vars) : text_(text), num_vars_(num_vars) {}

  Polynomial parse() {
    Polynomial result(num_vars_);
    skip_space();
    if (at_end()) throw ParseError(pos_, "empty polynomial");
    bool first = true;
    while (true) {
      skip_space();
      if (at_end()) break;
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
        skip_space();
      } else if (!first) {
        throw ParseError(pos_, "expected '+' or '-' between terms");
      }
      first = false;
      auto [exps, coef] = parse_term();
      result.add_term(exps, negative ? Rational(-coef) : coef);
    }
    return result;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  Integer parse_unsigned(const char* what) {
    skip_space();
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw ParseError(start, std::string("expected ") + what);
    return Integer(std::string(text_.substr(start, pos_ - start)), 10);
  }

  std::pair<ExponentVector, Rational> parse_term() {
    ExponentVector exps(num_vars_, 0);
    Rational coef = 1;
    bool need_factor = true;
    skip_space();
    if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      const std::size_t start = pos_;
      Integer num = parse_unsigned("coefficient");
      Integer den = 1;
      skip_space();
      if (!at_end() && peek() == '/') {
        ++pos_;
        den = parse_unsigned("denominator");
        if (den == 0) throw ParseError(start, "zero denominator");
      }
      coef = Rational(num, den);
      coef.canonicalize();
      skip_space();
      if (at_end() || peek() != '*') return {exps, coef};
      ++pos_;
    }
    while (need_factor) {
      skip_space();
      if (at_end() || peek() != 'x') throw ParseError(pos_, "expected variable 'xI'");
      const std::size_t var_pos = pos_;
      ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        throw ParseError(pos_, "expected variable index after 'x'");
      }
      Integer index = parse_unsigned("variable index");
      if (index < 1 || index > num_vars_) {
        throw ParseError(var_pos, "variable index " + index.get_str() + " outside 1.." + std::to_string(num_vars_));
      }
      int exponent = 1;
      skip_space();
      if (!at_end() && peek() == '^') {
        ++pos_;
        Integer e = parse_unsigned("exponent");
        if (e > 1000000) throw ParseError(pos_, "exponent too large");
        exponent = static_cast<int>(e.get_si());
      }
      exps[static_cast<std::size_t>(index.get_ui() - 1)] += exponent;
      skip_space();
      if (!at_end() && peek() == '*') {
        ++pos_;
      } else {
        need_factor = false;
      }
    }
    return {exps, coef};
  }

  std::string_view text_;
  std::size_t num_vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t num_vars) {
  if (num_vars == 0) throw std::invalid_argument("num_vars must be positive");
  return PolynomialParser(text, num_vars).parse();
}

Rational l_norm(const Polynomial& p) {
  if (p.is_zero()) throw std::domain_error("L(p) is undefined for the zero polynomial");
  Rational best = 0;
  for (const auto& [e, c] : p.terms()) {
    Integer multi = 1;
    for (int k : e) multi *= factorial(static_cast<unsigned>(k));
    Rational weight(multi, factorial(static_cast<unsigned>(total_degree(e))));
    weight.canonicalize();
    best = std::max(best, Rational(abs(c) * weight));
  }
  return best;
}

Polynomial box_generator(std::size_t num_vars, std::size_t index) {
  const Polynomial x = Polynomial::variable(num_vars, index);
  return x - x * x;
}

}  // namespace cubecert
