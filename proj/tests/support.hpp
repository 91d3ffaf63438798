#pragma once

#include <random>
#include <string>

#include "cubecert/polynomial.hpp"

namespace cubecert::testing {

inline Polynomial P(const std::string& text, std::size_t n) { return parse_polynomial(text, n); }

inline Rational Q(const std::string& text) { return parse_rational(text); }

/// Small random polynomial with integer coefficients in [-3, 3].
inline Polynomial random_small(std::size_t n, int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-3, 3);
  Polynomial p(n);
  for (const auto& e : monomial_basis(n, degree)) p.add_term(e, c(rng));
  return p;
}

inline std::vector<Rational> random_point(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 9);
  std::vector<Rational> pt;
  for (std::size_t i = 0; i < n; ++i) pt.emplace_back(num(rng), den(rng));
  for (auto& v : pt) v.canonicalize();
  return pt;
}

}  // namespace cubecert::testing
