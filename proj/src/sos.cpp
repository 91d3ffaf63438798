#include "cubecert/sos.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace cubecert {

namespace {

using MonomialIndex = std::map<ExponentVector, std::size_t, GradedLexLess>;

MonomialIndex index_of(const std::vector<ExponentVector>& basis) {
  MonomialIndex out;
  for (std::size_t i = 0; i < basis.size(); ++i) out.emplace(basis[i], i);
  return out;
}

ExponentVector add_exponents(const ExponentVector& a, const ExponentVector& b) {
  ExponentVector e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
  return e;
}

Eigen::MatrixXd to_double_matrix(const RationalMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = to_double(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

/// Univariate basis phi_0..phi_D with phi_a = sum_c U[a][c] x^c and the
/// linearization of products phi_a phi_b = sum_c lin[a][b][c] phi_c.
struct UnivariateBasis {
  SosBasis kind = SosBasis::monomial;
  int max_degree = 0;
  RationalMatrix to_monomial;
  RationalMatrix from_monomial;
  std::vector<std::vector<std::vector<std::pair<int, Rational>>>> lin_exact;
  std::vector<std::vector<std::vector<std::pair<int, double>>>> lin;

  UnivariateBasis(SosBasis family, int d) : kind(family), max_degree(d) {
    const auto n = static_cast<std::size_t>(d + 1);
    to_monomial.assign(n, std::vector<Rational>(n));
    if (kind == SosBasis::monomial) {
      for (std::size_t a = 0; a < n; ++a) to_monomial[a][a] = 1;
    } else {
      // T*_{k+1} = 2 (2x - 1) T*_k - T*_{k-1}
      to_monomial[0][0] = 1;
      if (n > 1) {
        to_monomial[1][0] = -1;
        to_monomial[1][1] = 2;
      }
      for (std::size_t k = 1; k + 1 < n; ++k) {
        for (std::size_t c = 0; c <= k; ++c) {
          to_monomial[k + 1][c + 1] += 4 * to_monomial[k][c];
          to_monomial[k + 1][c] -= 2 * to_monomial[k][c];
        }
        for (std::size_t c = 0; c < n; ++c) to_monomial[k + 1][c] -= to_monomial[k - 1][c];
      }
    }
    from_monomial.assign(n, std::vector<Rational>(n));
    for (std::size_t c = 0; c < n; ++c) {
      from_monomial[c][c] = 1 / to_monomial[c][c];
      for (std::size_t a = c; a-- > 0;) {
        Rational s = 0;
        for (std::size_t k = a + 1; k <= c; ++k) s += from_monomial[c][k] * to_monomial[k][a];
        from_monomial[c][a] = -s / to_monomial[a][a];
      }
    }
    lin_exact.assign(n, std::vector<std::vector<std::pair<int, Rational>>>(n));
    lin.assign(n, std::vector<std::vector<std::pair<int, double>>>(n));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; a + b < n; ++b) {
        std::vector<Rational> prod(a + b + 1);
        for (std::size_t i = 0; i <= a; ++i) {
          for (std::size_t j = 0; j <= b; ++j) prod[i + j] += to_monomial[a][i] * to_monomial[b][j];
        }
        std::vector<Rational> coef(a + b + 1);
        for (std::size_t c = 0; c < prod.size(); ++c) {
          if (prod[c] == 0) continue;
          for (std::size_t k = 0; k <= c; ++k) coef[k] += prod[c] * from_monomial[c][k];
        }
        for (std::size_t k = 0; k < coef.size(); ++k) {
          if (coef[k] == 0) continue;
          lin_exact[a][b].emplace_back(static_cast<int>(k), coef[k]);
          lin[a][b].emplace_back(static_cast<int>(k), to_double(coef[k]));
        }
      }
    }
  }
};

std::shared_ptr<const UnivariateBasis> univariate(SosBasis kind, int degree) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const UnivariateBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[static_cast<int>(kind)];
  if (!slot || slot->max_degree < degree) slot = std::make_shared<UnivariateBasis>(kind, std::max(degree, 16));
  return slot;
}

using PhiCoeffs = std::map<ExponentVector, Rational, GradedLexLess>;

void add_product_exact(const UnivariateBasis& u, const ExponentVector& a, const ExponentVector& b,
                       const Rational& scale, PhiCoeffs& out) {
  std::vector<std::pair<ExponentVector, Rational>> cur{{ExponentVector(a.size(), 0), scale}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& l = u.lin_exact[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];
    std::vector<std::pair<ExponentVector, Rational>> next;
    next.reserve(cur.size() * l.size());
    for (const auto& [e, v] : cur) {
      for (const auto& [c, w] : l) {
        ExponentVector f = e;
        f[i] = c;
        next.emplace_back(std::move(f), v * w);
      }
    }
    cur = std::move(next);
  }
  for (auto& [e, v] : cur) out[e] += v;
}

PhiCoeffs multiply(const UnivariateBasis& u, const PhiCoeffs& f, const PhiCoeffs& g) {
  PhiCoeffs out;
  for (const auto& [a, x] : f) {
    for (const auto& [b, y] : g) add_product_exact(u, a, b, x * y, out);
  }
  return out;
}

PhiCoeffs to_phi(const UnivariateBasis& u, const Polynomial& p) {
  PhiCoeffs out;
  const std::size_t n = p.num_vars();
  for (const auto& [e, c] : p.terms()) {
    std::vector<std::pair<ExponentVector, Rational>> cur{{ExponentVector(n, 0), c}};
    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = u.from_monomial[static_cast<std::size_t>(e[i])];
      std::vector<std::pair<ExponentVector, Rational>> next;
      for (const auto& [f, v] : cur) {
        for (int k = 0; k <= e[i]; ++k) {
          if (row[static_cast<std::size_t>(k)] == 0) continue;
          ExponentVector g = f;
          g[i] = k;
          next.emplace_back(std::move(g), v * row[static_cast<std::size_t>(k)]);
        }
      }
      cur = std::move(next);
    }
    for (auto& [f, v] : cur) out[f] += v;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Polynomial from_phi(const UnivariateBasis& u, const PhiCoeffs& coeffs, std::size_t n) {
  Polynomial out(n);
  for (const auto& [e, c] : coeffs) {
    if (c == 0) continue;
    std::vector<std::pair<ExponentVector, Rational>> cur{{ExponentVector(n, 0), c}};
    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = u.to_monomial[static_cast<std::size_t>(e[i])];
      std::vector<std::pair<ExponentVector, Rational>> next;
      for (const auto& [f, v] : cur) {
        for (int k = 0; k <= e[i]; ++k) {
          if (row[static_cast<std::size_t>(k)] == 0) continue;
          ExponentVector g = f;
          g[i] = k;
          next.emplace_back(std::move(g), v * row[static_cast<std::size_t>(k)]);
        }
      }
      cur = std::move(next);
    }
    for (auto& [f, v] : cur) out.add_term(f, v);
  }
  return out;
}

Rational gram_entry(const SosPolynomial& s, std::size_t a, std::size_t b) {
  if (s.exact_gram) return (*s.exact_gram)[a][b];
  return from_double(s.gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
}

/// sum_ab G_ab phi_a phi_b in the block's own family.
PhiCoeffs gram_expansion(const UnivariateBasis& u, const SosPolynomial& s) {
  PhiCoeffs out;
  const std::size_t n = s.basis.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      Rational c = gram_entry(s, a, b);
      if (a != b) c += gram_entry(s, b, a);
      if (c != 0) add_product_exact(u, s.basis[a], s.basis[b], c, out);
    }
  }
  return out;
}

int max_basis_exponent(const SosPolynomial& s) {
  int d = 0;
  for (const auto& e : s.basis) {
    for (int v : e) d = std::max(d, v);
  }
  return d;
}

}  // namespace

int SosPolynomial::degree() const {
  int d = -1;
  for (const auto& e : basis) d = std::max(d, 2 * total_degree(e));
  return d;
}

Polynomial SosPolynomial::expand() const {
  if (basis.empty()) return Polynomial(num_vars);
  const auto u = univariate(family, 2 * max_basis_exponent(*this));
  return from_phi(*u, gram_expansion(*u, *this), num_vars);
}

const char* to_string(SosBasis basis) { return basis == SosBasis::monomial ? "monomial" : "chebyshev"; }

Polynomial basis_polynomial(SosBasis family, const ExponentVector& index) {
  int d = 0;
  for (int v : index) d = std::max(d, v);
  const auto u = univariate(family, d);
  return from_phi(*u, PhiCoeffs{{index, Rational(1)}}, index.size());
}

SosPolynomial to_monomial_family(const SosPolynomial& s) {
  if (s.family == SosBasis::monomial || s.empty()) {
    SosPolynomial out = s;
    out.family = SosBasis::monomial;
    return out;
  }
  const auto idx = index_of(s.basis);
  const std::size_t n = s.basis.size();
  // Row a of T holds phi_a over the same index set (phi_a only involves
  // monomials below a componentwise).
  std::vector<Polynomial> rows;
  rows.reserve(n);
  for (const auto& e : s.basis) rows.push_back(basis_polynomial(s.family, e));
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (const auto& [m, c] : rows[a].terms()) {
      t(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(idx.at(m))) = to_double(c);
    }
  }
  SosPolynomial out = s;
  out.family = SosBasis::monomial;
  out.gram = t.transpose() * s.gram * t;
  if (s.exact_gram) {
    RationalMatrix g(n, std::vector<Rational>(n));
    const auto& src = *s.exact_gram;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (src[a][b] == 0) continue;
        for (const auto& [ma, ca] : rows[a].terms()) {
          const std::size_t i = idx.at(ma);
          for (const auto& [mb, cb] : rows[b].terms()) g[i][idx.at(mb)] += ca * src[a][b] * cb;
        }
      }
    }
    out.gram = to_double_matrix(g);
    out.exact_gram = std::move(g);
  }
  return out;
}

double SosPolynomial::min_eigenvalue() const {
  if (basis.empty()) return 0.0;
  const Eigen::MatrixXd sym = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

SosPolynomial zero_sos(std::size_t num_vars) {
  SosPolynomial s;
  s.num_vars = num_vars;
  s.gram = Eigen::MatrixXd(0, 0);
  s.exact_gram = RationalMatrix{};
  return s;
}

SosPolynomial exact_sos(std::size_t num_vars, std::vector<ExponentVector> basis, RationalMatrix gram) {
  if (gram.size() != basis.size()) throw DimensionMismatch("Gram size differs from basis size");
  SosPolynomial s;
  s.num_vars = num_vars;
  s.basis = std::move(basis);
  s.gram = to_double_matrix(gram);
  s.exact_gram = std::move(gram);
  return s;
}

SosPolynomial add_sos(const SosPolynomial& a_in, const SosPolynomial& b_in) {
  if (a_in.num_vars != b_in.num_vars) throw DimensionMismatch("SOS terms have different variable counts");
  if (a_in.empty()) return b_in;
  if (b_in.empty()) return a_in;
  if (a_in.family == b_in.family && a_in.basis == b_in.basis) {
    SosPolynomial out = a_in;
    out.gram += b_in.gram;
    if (a_in.is_exact() && b_in.is_exact()) {
      for (std::size_t i = 0; i < out.basis.size(); ++i) {
        for (std::size_t j = 0; j < out.basis.size(); ++j) (*out.exact_gram)[i][j] += (*b_in.exact_gram)[i][j];
      }
    } else {
      out.exact_gram.reset();
    }
    return out;
  }
  const SosPolynomial a = to_monomial_family(a_in);
  const SosPolynomial b = to_monomial_family(b_in);
  std::vector<ExponentVector> basis = a.basis;
  basis.insert(basis.end(), b.basis.begin(), b.basis.end());
  std::sort(basis.begin(), basis.end(), GradedLexLess{});
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  const auto idx = index_of(basis);
  const std::size_t s = basis.size();

  SosPolynomial out;
  out.num_vars = a.num_vars;
  out.basis = basis;
  const bool exact = a.is_exact() && b.is_exact();
  out.gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  RationalMatrix eg;
  if (exact) eg.assign(s, std::vector<Rational>(s));
  for (const SosPolynomial* part : {&a, &b}) {
    std::vector<std::size_t> map(part->basis.size());
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = idx.at(part->basis[i]);
    for (std::size_t i = 0; i < map.size(); ++i) {
      for (std::size_t j = 0; j < map.size(); ++j) {
        out.gram(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) +=
            part->gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (exact) eg[map[i]][map[j]] += (*part->exact_gram)[i][j];
      }
    }
  }
  if (exact) out.exact_gram = std::move(eg);
  return out;
}

SosPolynomial scale_sos(const SosPolynomial& s, const Rational& c) {
  if (c < 0) throw std::invalid_argument("SOS terms may only be scaled by nonnegative constants");
  SosPolynomial out = s;
  out.gram *= to_double(c);
  if (out.exact_gram) {
    for (auto& row : *out.exact_gram) {
      for (auto& v : row) v *= c;
    }
  }
  return out;
}

SosPolynomial map_sos(const SosPolynomial& s_in, std::span<const VariableImage> images, std::size_t new_num_vars) {
  if (s_in.empty()) return zero_sos(new_num_vars);
  const SosPolynomial s = to_monomial_family(s_in);
  std::vector<Polynomial> image;
  image.reserve(s.basis.size());
  std::vector<ExponentVector> basis;
  for (const auto& e : s.basis) {
    image.push_back(Polynomial::monomial(e).map_variables(images, new_num_vars));
    for (const auto& [m, c] : image.back().terms()) basis.push_back(m);
  }
  std::sort(basis.begin(), basis.end(), GradedLexLess{});
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  const auto idx = index_of(basis);
  const std::size_t rows = s.basis.size();
  const std::size_t cols = basis.size();

  SosPolynomial out;
  out.num_vars = new_num_vars;
  out.basis = basis;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t a = 0; a < rows; ++a) {
    for (const auto& [m, c] : image[a].terms()) {
      t(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(idx.at(m))) = to_double(c);
    }
  }
  out.gram = t.transpose() * s.gram * t;
  if (s.exact_gram) {
    // Exact T^T G T with the sparse image rows.
    RationalMatrix g(cols, std::vector<Rational>(cols));
    const auto& src = *s.exact_gram;
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = 0; b < rows; ++b) {
        if (src[a][b] == 0) continue;
        for (const auto& [ma, ca] : image[a].terms()) {
          const std::size_t i = idx.at(ma);
          for (const auto& [mb, cb] : image[b].terms()) g[i][idx.at(mb)] += ca * src[a][b] * cb;
        }
      }
    }
    out.gram = to_double_matrix(g);
    out.exact_gram = std::move(g);
  }
  return out;
}

bool is_psd_exact(const RationalMatrix& input) {
  RationalMatrix m = input;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw DimensionMismatch("Gram matrix is not square");
    for (std::size_t j = 0; j < i; ++j) {
      if (m[i][j] != m[j][i]) return false;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Rational d = m[k][k];
    if (d < 0) return false;
    if (d == 0) {
      for (std::size_t j = k + 1; j < n; ++j) {
        if (m[k][j] != 0) return false;
      }
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      const Rational f = m[i][k] / d;
      for (std::size_t j = k + 1; j < n; ++j) {
        if (m[k][j] != 0) m[i][j] -= f * m[k][j];
      }
    }
  }
  return true;
}

const char* to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::exact:
      return "exact";
    case CertificateStatus::floating:
      return "float";
    case CertificateStatus::failed:
      return "failed";
  }
  return "failed";
}

bool QuadraticModuleCertificate::is_exact() const {
  if (!sigma0.is_exact()) return false;
  return std::all_of(sigmas.begin(), sigmas.end(), [](const SosPolynomial& s) { return s.is_exact(); });
}

Polynomial QuadraticModuleCertificate::expand() const {
  Polynomial out(num_vars, mu);
  out += sigma0.expand();
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!sigmas[i].empty()) out += sigmas[i].expand() * box_generator(num_vars, i);
  }
  return out;
}

bool PreorderingCertificate::is_exact() const {
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.sigma.is_exact(); });
}

Polynomial PreorderingCertificate::expand() const {
  Polynomial out(num_vars, mu);
  for (const auto& t : terms) {
    if (!t.sigma.empty()) out += t.sigma.expand() * t.product.expand();
  }
  return out;
}

QuadraticModuleCertificate zero_certificate(std::size_t num_vars, int order) {
  QuadraticModuleCertificate c;
  c.order = order;
  c.num_vars = num_vars;
  c.mu = 0;
  c.sigma0 = zero_sos(num_vars);
  c.sigmas.assign(num_vars, zero_sos(num_vars));
  return c;
}

QuadraticModuleCertificate add_certificates(const QuadraticModuleCertificate& a, const QuadraticModuleCertificate& b) {
  if (a.num_vars != b.num_vars) throw DimensionMismatch("certificates have different variable counts");
  QuadraticModuleCertificate out = a;
  out.order = std::max(a.order, b.order);
  out.mu = a.mu + b.mu;
  out.sigma0 = add_sos(a.sigma0, b.sigma0);
  for (std::size_t i = 0; i < out.sigmas.size(); ++i) out.sigmas[i] = add_sos(a.sigmas[i], b.sigmas[i]);
  return out;
}

QuadraticModuleCertificate map_certificate(const QuadraticModuleCertificate& cert,
                                           std::span<const VariableImage> images, std::size_t new_num_vars) {
  if (images.size() != cert.num_vars) throw DimensionMismatch("one image per variable is required");
  QuadraticModuleCertificate out = zero_certificate(new_num_vars, cert.order);
  out.mu = cert.mu;
  out.construction = cert.construction;
  out.sigma0 = map_sos(cert.sigma0, images, new_num_vars);
  for (std::size_t j = 0; j < cert.sigmas.size(); ++j) {
    if (images[j].kind == VariableImage::Kind::one || cert.sigmas[j].empty()) continue;
    const std::size_t i = images[j].index;
    out.sigmas[i] = add_sos(out.sigmas[i], map_sos(cert.sigmas[j], images, new_num_vars));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SDP encoding

namespace {

using PhiPoly = std::map<ExponentVector, double, GradedLexLess>;

void add_product(const UnivariateBasis& u, const ExponentVector& a, const ExponentVector& b, double scale,
                 PhiPoly& out) {
  std::vector<std::pair<ExponentVector, double>> cur{{ExponentVector(a.size(), 0), scale}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& l = u.lin[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];
    if (l.size() == 1) {
      for (auto& [e, v] : cur) {
        e[i] = l[0].first;
        v *= l[0].second;
      }
      continue;
    }
    std::vector<std::pair<ExponentVector, double>> next;
    next.reserve(cur.size() * l.size());
    for (const auto& [e, v] : cur) {
      for (const auto& [c, w] : l) {
        ExponentVector f = e;
        f[i] = c;
        next.emplace_back(std::move(f), v * w);
      }
    }
    cur = std::move(next);
  }
  for (auto& [e, v] : cur) out[e] += v;
}

/// The SDP for sup mu s.t. p - mu = sum_j s_j w_j with s_j SOS, everything
/// independent of p. Rows are the non-constant basis polynomials that some
/// block reaches; the constant row is the objective.
struct SosProgram {
  std::size_t num_vars = 0;
  int order = 0;
  std::shared_ptr<const UnivariateBasis> uni;
  std::vector<std::size_t> multiplier_of_block;
  std::vector<std::vector<ExponentVector>> block_basis;
  std::vector<ExponentVector> rows;
  MonomialIndex row_index;
  SdpProblem sdp;
  SosBasis family = SosBasis::monomial;
};

std::shared_ptr<const SosProgram> build_program(std::size_t n, int order, const std::vector<Polynomial>& multipliers,
                                                SosBasis kind) {
  auto prog = std::make_shared<SosProgram>();
  prog->num_vars = n;
  prog->order = order;
  prog->family = kind;
  const auto uni = univariate(kind, order);
  prog->uni = uni;

  std::map<ExponentVector, SparseSymmetric, GradedLexLess> by_row;
  for (std::size_t j = 0; j < multipliers.size(); ++j) {
    const int dw = multipliers[j].degree();
    if (dw < 0 || dw > order) continue;
    const int half = (order - dw) / 2;
    const std::size_t block = prog->block_basis.size();
    prog->multiplier_of_block.push_back(j);
    prog->block_basis.push_back(monomial_basis(n, half));
    const auto& basis = prog->block_basis.back();
    prog->sdp.block_sizes.push_back(basis.size());
    const auto w = to_phi(*uni, multipliers[j]);
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        PhiPoly ab;
        add_product(*uni, basis[a], basis[b], 1.0, ab);
        PhiPoly prod;
        for (const auto& [e, v] : ab) {
          for (const auto& [f, c] : w) add_product(*uni, e, f, v * to_double(c), prod);
        }
        for (const auto& [e, v] : prod) {
          if (v != 0.0) by_row[e].push_back({block, a, b, v});
        }
      }
    }
  }

  const ExponentVector zero(n, 0);
  for (auto& [e, entries] : by_row) {
    if (e == zero) {
      prog->sdp.objective = std::move(entries);
      continue;
    }
    prog->row_index.emplace(e, prog->rows.size());
    prog->rows.push_back(e);
    prog->sdp.constraints.push_back(std::move(entries));
  }
  return prog;
}

enum class ProgramKind { putinar, schmudgen };

std::vector<Polynomial> program_multipliers(ProgramKind kind, std::size_t n, int order,
                                            std::vector<HandelmanBasisElement>* products = nullptr) {
  std::vector<Polynomial> out;
  if (kind == ProgramKind::putinar) {
    out.emplace_back(n, 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(box_generator(n, i));
    return out;
  }
  for (auto& element : enumerate_handelman_basis(n, std::min<int>(order, static_cast<int>(2 * n)))) {
    const bool squarefree = std::all_of(element.h.begin(), element.h.end(), [](int v) { return v <= 1; }) &&
                            std::all_of(element.k.begin(), element.k.end(), [](int v) { return v <= 1; });
    if (!squarefree) continue;
    out.push_back(element.expand());
    if (products) products->push_back(std::move(element));
  }
  return out;
}

std::shared_ptr<const SosProgram> cached_program(ProgramKind kind, std::size_t n, int order, SosBasis basis) {
  static std::mutex mutex;
  static std::map<std::tuple<int, std::size_t, int, int>, std::shared_ptr<const SosProgram>> cache;
  const auto key = std::make_tuple(static_cast<int>(kind), n, order, static_cast<int>(basis));
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto prog = build_program(n, order, program_multipliers(kind, n, order), basis);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, prog).first->second;
}

struct RawSolve {
  bool structurally_infeasible = false;
  SdpSolution sdp;
  double mu = 0.0;
  double gap = 0.0;
  std::vector<SosPolynomial> blocks;
  double p0 = 0.0;
};

RawSolve solve_program(const SosProgram& prog, const Polynomial& p, const SosOptions& options) {
  RawSolve raw;
  const auto coeffs = to_phi(*prog.uni, p);
  const ExponentVector zero(prog.num_vars, 0);
  SdpProblem sdp = prog.sdp;
  sdp.rhs.assign(prog.rows.size(), 0.0);
  for (const auto& [e, c] : coeffs) {
    if (e == zero) {
      raw.p0 = to_double(c);
      continue;
    }
    auto it = prog.row_index.find(e);
    if (it == prog.row_index.end()) {
      raw.structurally_infeasible = true;
      return raw;
    }
    sdp.rhs[it->second] = to_double(c);
  }
  raw.sdp = sdp_solve(sdp, options.sdp);
  raw.mu = raw.p0 - raw.sdp.primal_objective;
  raw.gap = std::abs(raw.sdp.primal_objective - raw.sdp.dual_objective);
  for (std::size_t k = 0; k < prog.block_basis.size(); ++k) {
    SosPolynomial s;
    s.num_vars = prog.num_vars;
    s.family = prog.family;
    s.basis = prog.block_basis[k];
    s.gram = 0.5 * (raw.sdp.x[k] + raw.sdp.x[k].transpose());
    raw.blocks.push_back(std::move(s));
  }
  return raw;
}

void check_order(const Polynomial& p, int order) {
  if (order < p.degree()) {
    throw std::invalid_argument("relaxation order " + std::to_string(order) + " is below deg(p) = " +
                                std::to_string(p.degree()));
  }
  if (order < 0) throw std::invalid_argument("relaxation order must be nonnegative");
}

struct WeightedBlock {
  const SosPolynomial* sigma;
  Polynomial weight;
};

QmReport verify_blocks(const std::vector<WeightedBlock>& parts, const Rational& mu, const Polynomial& p, bool exact,
                       double min_eig, bool psd, double tol) {
  QmReport report;
  report.min_eigenvalue = min_eig;
  report.family = SosBasis::monomial;
  int degree = std::max(p.degree(), 0);
  for (const auto& part : parts) {
    if (part.sigma->empty()) continue;
    if (part.sigma->family == SosBasis::chebyshev) report.family = SosBasis::chebyshev;
    degree = std::max(degree, part.sigma->degree() + std::max(part.weight.degree(), 0));
  }
  const auto u = univariate(report.family, degree);
  const std::size_t n = p.num_vars();
  PhiCoeffs total = to_phi(*u, Polynomial(n, mu) - p);
  for (const auto& part : parts) {
    if (part.sigma->empty() || part.weight.is_zero()) continue;
    PhiCoeffs sig = part.sigma->family == report.family ? gram_expansion(*u, *part.sigma)
                                                        : to_phi(*u, part.sigma->expand());
    if (part.weight != Polynomial(n, 1)) sig = multiply(*u, sig, to_phi(*u, part.weight));
    for (auto& [e, c] : sig) total[e] += c;
  }
  for (auto it = total.begin(); it != total.end();) it = it->second == 0 ? total.erase(it) : std::next(it);
  double worst = 0.0;
  double l1 = 0.0;
  for (const auto& [e, c] : total) {
    const double v = std::abs(to_double(c));
    worst = std::max(worst, v);
    l1 += v;
  }
  report.max_residual = worst;
  report.residual_l1 = l1;
  report.residual = from_phi(*u, total, n);
  std::string problems;
  if (!psd) problems += "Gram block not PSD (min eigenvalue " + std::to_string(min_eig) + "); ";
  if (exact) {
    if (!total.empty()) problems += "nonzero exact residual " + report.residual.to_string() + "; ";
  } else if (worst > tol) {
    problems += "residual " + std::to_string(worst) + " exceeds tolerance; ";
  }
  report.ok = problems.empty();
  report.status = !report.ok ? CertificateStatus::failed : exact ? CertificateStatus::exact : CertificateStatus::floating;
  report.diagnostic = report.ok ? to_string(report.status) : problems;
  return report;
}

void check_block(const SosPolynomial& s, double tol, bool& psd, double& min_eig) {
  if (s.empty()) return;
  const double e = s.min_eigenvalue();
  min_eig = std::min(min_eig, e);
  if (s.is_exact() ? !is_psd_exact(*s.exact_gram) : e < -tol) psd = false;
}

}  // namespace

QmReport verify_qm(const QuadraticModuleCertificate& cert, const Polynomial& p, double tol) {
  if (cert.num_vars != p.num_vars() || cert.sigmas.size() != cert.num_vars) {
    QmReport r;
    r.residual = Polynomial(p.num_vars());
    r.diagnostic = "certificate shape does not match the polynomial";
    return r;
  }
  bool psd = true;
  double min_eig = std::numeric_limits<double>::infinity();
  check_block(cert.sigma0, tol, psd, min_eig);
  for (const auto& s : cert.sigmas) check_block(s, tol, psd, min_eig);
  if (!std::isfinite(min_eig)) min_eig = 0.0;
  std::vector<WeightedBlock> parts{{&cert.sigma0, Polynomial(cert.num_vars, 1)}};
  for (std::size_t i = 0; i < cert.sigmas.size(); ++i) {
    parts.push_back({&cert.sigmas[i], box_generator(cert.num_vars, i)});
  }
  return verify_blocks(parts, cert.mu, p, cert.is_exact(), min_eig, psd, tol);
}

QmReport verify_preordering(const PreorderingCertificate& cert, const Polynomial& p, double tol) {
  if (cert.num_vars != p.num_vars()) {
    QmReport r;
    r.residual = Polynomial(p.num_vars());
    r.diagnostic = "certificate shape does not match the polynomial";
    return r;
  }
  bool psd = true;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& t : cert.terms) check_block(t.sigma, tol, psd, min_eig);
  if (!std::isfinite(min_eig)) min_eig = 0.0;
  std::vector<WeightedBlock> parts;
  for (const auto& t : cert.terms) parts.push_back({&t.sigma, t.product.expand()});
  return verify_blocks(parts, cert.mu, p, cert.is_exact(), min_eig, psd, tol);
}

PutinarResult putinar_lower_bound(const Polynomial& p, int order, const SosOptions& options) {
  check_order(p, order);
  if (order < 2) throw std::invalid_argument("Putinar relaxation needs order >= 2");
  const std::size_t n = p.num_vars();
  const auto prog = cached_program(ProgramKind::putinar, n, order, options.basis);
  RawSolve raw = solve_program(*prog, p, options);

  PutinarResult result;
  result.certificate = zero_certificate(n, order);
  if (raw.structurally_infeasible) {
    result.status = SdpStatus::primal_infeasible;
    result.verification.diagnostic = "no representation at this order";
    return result;
  }
  result.status = raw.sdp.status;
  result.iterations = raw.sdp.iterations;
  if (raw.sdp.status == SdpStatus::primal_infeasible) return result;
  result.mu = raw.mu;
  result.gap = raw.gap;
  result.certificate.mu = from_double(raw.mu);
  for (std::size_t k = 0; k < raw.blocks.size(); ++k) {
    const std::size_t j = prog->multiplier_of_block[k];
    if (j == 0) {
      result.certificate.sigma0 = std::move(raw.blocks[k]);
    } else {
      result.certificate.sigmas[j - 1] = std::move(raw.blocks[k]);
    }
  }
  result.verification = verify_qm(result.certificate, p, options.verify_tol);
  return result;
}

SchmudgenResult schmudgen_lower_bound(const Polynomial& p, int order, const SosOptions& options) {
  check_order(p, order);
  const std::size_t n = p.num_vars();
  if (n > 3) throw std::invalid_argument("Schmudgen relaxation is limited to n <= 3");
  std::vector<HandelmanBasisElement> products;
  program_multipliers(ProgramKind::schmudgen, n, order, &products);
  const auto prog = cached_program(ProgramKind::schmudgen, n, order, options.basis);
  RawSolve raw = solve_program(*prog, p, options);

  SchmudgenResult result;
  result.certificate.order = order;
  result.certificate.num_vars = n;
  if (raw.structurally_infeasible) {
    result.status = SdpStatus::primal_infeasible;
    result.verification.diagnostic = "no representation at this order";
    return result;
  }
  result.status = raw.sdp.status;
  result.iterations = raw.sdp.iterations;
  if (raw.sdp.status == SdpStatus::primal_infeasible) return result;
  result.mu = raw.mu;
  result.gap = raw.gap;
  result.certificate.mu = from_double(raw.mu);
  for (std::size_t k = 0; k < raw.blocks.size(); ++k) {
    result.certificate.terms.push_back({products[prog->multiplier_of_block[k]], std::move(raw.blocks[k])});
  }
  result.verification = verify_preordering(result.certificate, p, options.verify_tol);
  return result;
}

const char* to_string(MembershipResult::Outcome outcome) {
  switch (outcome) {
    case MembershipResult::Outcome::feasible:
      return "feasible";
    case MembershipResult::Outcome::infeasible:
      return "infeasible";
    case MembershipResult::Outcome::unknown:
      return "unknown";
  }
  return "unknown";
}

MembershipResult check_membership(const Polynomial& f, int order, const SosOptions& options) {
  MembershipResult out;
  const PutinarResult res = putinar_lower_bound(f, order, options);
  if (!res.mu) {
    out.outcome = MembershipResult::Outcome::infeasible;
    out.best_mu = -std::numeric_limits<double>::infinity();
    out.margin = -std::numeric_limits<double>::infinity();
    out.verification = res.verification;
    return out;
  }
  out.best_mu = *res.mu;
  // The dual objective bounds the best constant from above.
  out.margin = *res.mu + res.gap;
  if (!res.converged()) {
    out.verification = res.verification;
    return out;
  }
  if (out.margin <= -1e-6) {
    out.outcome = MembershipResult::Outcome::infeasible;
    out.verification = res.verification;
    return out;
  }
  // f = (f - mu) + mu: move mu into the constant of sigma_0.
  QuadraticModuleCertificate cert = res.certificate;
  if (!cert.sigma0.empty()) {
    cert.sigma0.gram(0, 0) += to_double(cert.mu);
    cert.mu = 0;
  }
  out.verification = verify_qm(cert, f, options.verify_tol);
  if (auto exact = rationalize_certificate(cert, f)) {
    cert = std::move(*exact);
    out.verification = verify_qm(cert, f, options.verify_tol);
  }
  if (out.verification.ok) {
    out.outcome = MembershipResult::Outcome::feasible;
    out.certificate = std::move(cert);
  }
  return out;
}

MinConstantResult min_constant(std::size_t num_vars, int order, const SosOptions& options) {
  ExponentVector ones(num_vars, 1);
  const PutinarResult res = putinar_lower_bound(Polynomial::monomial(ones), order, options);
  MinConstantResult out;
  out.status = res.status;
  out.gap = res.gap;
  out.value = res.mu ? -*res.mu : std::numeric_limits<double>::infinity();
  out.certificate = res.certificate;
  return out;
}

std::optional<QuadraticModuleCertificate> rationalize_certificate(const QuadraticModuleCertificate& cert,
                                                                  const Polynomial& p,
                                                                  std::span<const std::int64_t> denominator_bounds) {
  if (cert.num_vars != p.num_vars()) return std::nullopt;
  auto round_block = [](const SosPolynomial& s, std::int64_t bound) {
    if (s.is_exact()) return s;
    const std::size_t n = s.basis.size();
    RationalMatrix g(n, std::vector<Rational>(n));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        const double v = 0.5 * (s.gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +
                                s.gram(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)));
        g[a][b] = g[b][a] = approximate(v, bound);
      }
    }
    return exact_sos(s.num_vars, s.basis, std::move(g));
  };

  QuadraticModuleCertificate base = cert;
  base.sigma0 = to_monomial_family(cert.sigma0);
  for (auto& s : base.sigmas) s = to_monomial_family(s);
  if (base.sigma0.empty()) {
    base.sigma0 = exact_sos(cert.num_vars, {ExponentVector(cert.num_vars, 0)}, RationalMatrix{{Rational(0)}});
  }
  for (std::int64_t bound : denominator_bounds) {
    QuadraticModuleCertificate c = base;
    if (c.mu.get_den() > static_cast<unsigned long>(bound)) c.mu = approximate(to_double(cert.mu), bound);
    c.sigma0 = round_block(base.sigma0, bound);
    for (std::size_t i = 0; i < c.sigmas.size(); ++i) c.sigmas[i] = round_block(base.sigmas[i], bound);

    const Polynomial residual = p - c.expand();
    const auto& basis = c.sigma0.basis;
    auto& g = *c.sigma0.exact_gram;
    bool reachable = true;
    std::map<ExponentVector, std::vector<std::pair<std::size_t, std::size_t>>, GradedLexLess> pairs;
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t b = a; b < basis.size(); ++b) pairs[add_exponents(basis[a], basis[b])].emplace_back(a, b);
    }
    for (const auto& [e, r] : residual.terms()) {
      auto it = pairs.find(e);
      if (total_degree(e) == 0) {
        if (r < 0 || it == pairs.end()) {
          c.mu += r;
        } else {
          g[0][0] += r;
        }
        continue;
      }
      if (it == pairs.end()) {
        reachable = false;
        break;
      }
      int count = 0;
      for (const auto& [a, b] : it->second) count += a == b ? 1 : 2;
      const Rational share = r / count;
      for (const auto& [a, b] : it->second) {
        g[a][b] += share;
        if (a != b) g[b][a] += share;
      }
    }
    if (!reachable) continue;
    c.sigma0.gram = to_double_matrix(g);
    bool psd = is_psd_exact(g);
    for (const auto& s : c.sigmas) psd = psd && (s.empty() || is_psd_exact(*s.exact_gram));
    if (!psd) continue;
    if (!(p - c.expand()).is_zero()) continue;
    return c;
  }
  return std::nullopt;
}

std::optional<QuadraticModuleCertificate> rationalize_certificate(const QuadraticModuleCertificate& cert,
                                                                  const Polynomial& p) {
  static const std::int64_t ladder[] = {16, 1024, std::int64_t{1} << 20, std::int64_t{1} << 30};
  return rationalize_certificate(cert, p, ladder);
}

}  // namespace cubecert
