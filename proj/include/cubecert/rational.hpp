#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace cubecert {

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses `a` or `a/b` (optional leading sign). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical text form: `a` for integers, `a/b` otherwise.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

/// Exact conversion of a finite double.
Rational from_double(double value);

/// Best rational approximation of `value` with denominator at most
/// `max_denominator` (continued-fraction convergents and semiconvergents).
Rational approximate(double value, std::int64_t max_denominator);

Integer binomial(unsigned n, unsigned k);
Integer factorial(unsigned n);

/// Largest double not exceeding the rational (rounded toward -inf).
double round_down(const Rational& value);
/// Smallest double not below the rational (rounded toward +inf).
double round_up(const Rational& value);

}  // namespace cubecert
