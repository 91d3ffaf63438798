#include "cubecert/bernstein.hpp"

#include <algorithm>
#include <stdexcept>

namespace cubecert {

namespace {

std::size_t grid_size(int degree, std::size_t num_vars) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < num_vars; ++i) size *= static_cast<std::size_t>(degree + 1);
  return size;
}

// Evaluates sum_j a_j prod_i table[k_i][j_i] for every grid point k, one
// variable at a time. `table` has (degree+1) rows and (max_exp+1) columns.
std::vector<Rational> tensor_transform(const Polynomial& p, int degree,
                                       const std::vector<std::vector<Rational>>& table, int max_exp) {
  const std::size_t n = p.num_vars();
  const auto in_radix = static_cast<std::size_t>(max_exp + 1);
  const auto out_radix = static_cast<std::size_t>(degree + 1);

  // Dense coefficient array over [0..max_exp]^n.
  std::size_t dense_size = 1;
  for (std::size_t i = 0; i < n; ++i) dense_size *= in_radix;
  std::vector<Rational> current(dense_size);
  for (const auto& [e, c] : p.terms()) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) idx = idx * in_radix + static_cast<std::size_t>(e[i]);
    current[idx] = c;
  }

  // Axis i is transformed from in_radix to out_radix; axes < i already have
  // out_radix, axes > i still in_radix.
  for (std::size_t axis = 0; axis < n; ++axis) {
    std::size_t outer = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= out_radix;
    std::size_t inner = 1;
    for (std::size_t i = axis + 1; i < n; ++i) inner *= in_radix;
    std::vector<Rational> next(outer * out_radix * inner);
    Rational product;
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t j = 0; j < in_radix; ++j) {
        const std::size_t src_base = (o * in_radix + j) * inner;
        bool any = false;
        for (std::size_t t = 0; t < inner; ++t) {
          if (current[src_base + t] != 0) {
            any = true;
            break;
          }
        }
        if (!any) continue;
        for (std::size_t k = 0; k < out_radix; ++k) {
          const Rational& w = table[k][j];
          if (w == 0) continue;
          const std::size_t dst_base = (o * out_radix + k) * inner;
          for (std::size_t t = 0; t < inner; ++t) {
            const Rational& src = current[src_base + t];
            if (src == 0) continue;
            mpq_mul(product.get_mpq_t(), w.get_mpq_t(), src.get_mpq_t());
            next[dst_base + t] += product;
          }
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

int max_variable_degree(const Polynomial& p) {
  int m = 0;
  for (const auto& [e, c] : p.terms()) {
    for (int v : e) m = std::max(m, v);
  }
  return m;
}

}  // namespace

Polynomial bernstein_basis(int degree, const ExponentVector& k) {
  if (degree < 0) throw std::invalid_argument("Bernstein degree must be nonnegative");
  const std::size_t n = k.size();
  Polynomial result(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (k[i] < 0 || k[i] > degree) throw std::out_of_range("Bernstein index outside [0, d]");
    const Polynomial x = Polynomial::variable(n, i);
    const Polynomial one_minus = Polynomial(n, 1) - x;
    const Rational c(binomial(static_cast<unsigned>(degree), static_cast<unsigned>(k[i])));
    result = result * (x.pow(static_cast<unsigned>(k[i])) * one_minus.pow(static_cast<unsigned>(degree - k[i])) * c);
  }
  return result;
}

std::vector<Rational> grid_values(const Polynomial& p, int degree) {
  if (degree < 1) throw std::invalid_argument("grid degree must be positive");
  const int max_exp = max_variable_degree(p);
  std::vector<std::vector<Rational>> table(static_cast<std::size_t>(degree + 1),
                                           std::vector<Rational>(static_cast<std::size_t>(max_exp + 1)));
  for (int k = 0; k <= degree; ++k) {
    Rational x(k, degree);
    x.canonicalize();
    Rational power = 1;
    for (int j = 0; j <= max_exp; ++j) {
      table[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = power;
      power *= x;
    }
  }
  return tensor_transform(p, degree, table, max_exp);
}

Polynomial bernstein_approx(const Polynomial& p, int degree) {
  if (degree < 1) throw std::invalid_argument("Bernstein degree must be positive");
  const std::vector<Rational> values = grid_values(p, degree);
  Polynomial result(p.num_vars());
  std::size_t idx = 0;
  for_each_grid_point(degree, p.num_vars(), [&](const ExponentVector& k) {
    const Rational& value = values[idx++];
    if (value != 0) result += bernstein_basis(degree, k) * value;
  });
  return result;
}

bool partition_of_unity_check(int degree, std::size_t num_vars) {
  if (degree < 1 || num_vars < 1) throw std::invalid_argument("partition_of_unity_check needs d, n >= 1");
  Polynomial sum(num_vars);
  Integer weight_sum = 0;
  for_each_grid_point(degree, num_vars, [&](const ExponentVector& k) {
    sum += bernstein_basis(degree, k);
    Integer w = 1;
    for (int ki : k) w *= binomial(static_cast<unsigned>(degree), static_cast<unsigned>(ki));
    weight_sum += w;
  });
  Integer expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), 2, static_cast<unsigned long>(degree) * num_vars);
  return sum == Polynomial(num_vars, 1) && weight_sum == expected;
}

BernsteinExpansion::BernsteinExpansion(int degree, std::size_t num_vars, std::vector<Rational> coefficients)
    : degree_(degree), num_vars_(num_vars), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_size(degree, num_vars)) {
    throw std::invalid_argument("Bernstein coefficient count does not match (d+1)^n");
  }
}

const Rational& BernsteinExpansion::at(const ExponentVector& k) const {
  if (k.size() != num_vars_) throw DimensionMismatch("Bernstein index has wrong length");
  std::size_t idx = 0;
  for (int ki : k) {
    if (ki < 0 || ki > degree_) throw std::out_of_range("Bernstein index outside [0, d]");
    idx = idx * static_cast<std::size_t>(degree_ + 1) + static_cast<std::size_t>(ki);
  }
  return coefficients_[idx];
}

Polynomial BernsteinExpansion::to_polynomial() const {
  Polynomial result(num_vars_);
  std::size_t idx = 0;
  for_each_grid_point(degree_, num_vars_, [&](const ExponentVector& k) {
    const Rational& b = coefficients_[idx++];
    if (b != 0) result += bernstein_basis(degree_, k) * b;
  });
  return result;
}

BernsteinExpansion to_bernstein_basis(const Polynomial& p, int degree) {
  if (degree < 1) throw std::invalid_argument("Bernstein degree must be positive");
  if (p.degree() > degree) {
    throw std::invalid_argument("Bernstein degree " + std::to_string(degree) + " is below deg(p) = " +
                                std::to_string(p.degree()));
  }
  // x^j = sum_k [C(k,j)/C(d,j)] B_{d,k}(x) for each variable.
  const int max_exp = std::max(max_variable_degree(p), 0);
  std::vector<std::vector<Rational>> table(static_cast<std::size_t>(degree + 1),
                                           std::vector<Rational>(static_cast<std::size_t>(max_exp + 1)));
  for (int k = 0; k <= degree; ++k) {
    for (int j = 0; j <= max_exp && j <= k; ++j) {
      Rational w(binomial(static_cast<unsigned>(k), static_cast<unsigned>(j)),
                 binomial(static_cast<unsigned>(degree), static_cast<unsigned>(j)));
      w.canonicalize();
      table[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = w;
    }
  }
  return BernsteinExpansion(degree, p.num_vars(), tensor_transform(p, degree, table, max_exp));
}

RationalInterval coefficient_enclosure(const Polynomial& p, int degree) {
  const BernsteinExpansion b = to_bernstein_basis(p, degree);
  const auto [lo, hi] = std::minmax_element(b.coefficients().begin(), b.coefficients().end());
  return {*lo, *hi};
}

}  // namespace cubecert
