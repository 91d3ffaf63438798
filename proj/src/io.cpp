#include "cubecert/io.hpp"

#include <stdexcept>

#include "json.hpp"

namespace cubecert {

using nlohmann::ordered_json;

namespace {

ordered_json sos_json(const SosPolynomial& s) {
  ordered_json j;
  j["family"] = to_string(s.family);
  j["basis"] = s.basis;
  ordered_json rows = ordered_json::array();
  for (std::size_t a = 0; a < s.basis.size(); ++a) {
    ordered_json row = ordered_json::array();
    for (std::size_t b = 0; b <= a; ++b) {
      if (s.exact_gram) row.push_back(to_string((*s.exact_gram)[a][b]));
      else row.push_back(s.gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    }
    rows.push_back(std::move(row));
  }
  j["gram"] = std::move(rows);
  return j;
}

SosBasis family_from(const std::string& name) {
  if (name == "monomial") return SosBasis::monomial;
  if (name == "chebyshev") return SosBasis::chebyshev;
  throw std::invalid_argument("unknown basis family: " + name);
}

SosPolynomial sos_from(const ordered_json& j, std::size_t num_vars) {
  SosPolynomial s;
  s.num_vars = num_vars;
  s.family = family_from(j.at("family").get<std::string>());
  s.basis = j.at("basis").get<std::vector<ExponentVector>>();
  const auto& rows = j.at("gram");
  const std::size_t size = s.basis.size();
  if (rows.size() != size) throw std::invalid_argument("gram row count differs from basis size");
  for (const auto& e : s.basis) {
    if (e.size() != num_vars) throw std::invalid_argument("basis exponent has wrong length");
  }
  bool exact = size > 0 && rows[0].size() > 0 && rows[0][0].is_string();
  s.gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  RationalMatrix q(size, std::vector<Rational>(size));
  for (std::size_t a = 0; a < size; ++a) {
    if (rows[a].size() != a + 1) throw std::invalid_argument("gram rows must be lower-triangular");
    for (std::size_t b = 0; b <= a; ++b) {
      const auto& v = rows[a][b];
      double d;
      if (exact) {
        q[a][b] = q[b][a] = parse_rational(v.get<std::string>());
        d = to_double(q[a][b]);
      } else {
        d = v.get<double>();
      }
      s.gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = d;
      s.gram(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = d;
    }
  }
  if (exact) s.exact_gram = std::move(q);
  return s;
}

ordered_json parse(const std::string& text, const char* kind) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate JSON: ") + e.what());
  }
  if (j.value("kind", std::string()) != kind) throw std::invalid_argument(std::string("expected a ") + kind + " certificate");
  if (j.value("format_version", 0) != kFormatVersion) throw std::invalid_argument("unsupported format_version");
  return j;
}

}  // namespace

std::string handelman_to_json(const HandelmanCertificate& cert) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "handelman";
  j["num_vars"] = cert.num_vars;
  j["order"] = cert.order;
  j["mu"] = to_string(cert.mu);
  j["terms"] = ordered_json::array();
  for (const auto& [e, lambda] : cert.terms) {
    j["terms"].push_back({{"h", e.h}, {"k", e.k}, {"lambda", to_string(lambda)}});
  }
  return j.dump(2) + "\n";
}

HandelmanCertificate handelman_from_json(const std::string& text) {
  try {
    const auto j = parse(text, "handelman");
    HandelmanCertificate c;
    c.num_vars = j.at("num_vars").get<std::size_t>();
    c.order = j.at("order").get<int>();
    c.mu = parse_rational(j.at("mu").get<std::string>());
    for (const auto& t : j.at("terms")) {
      HandelmanBasisElement e{t.at("h").get<ExponentVector>(), t.at("k").get<ExponentVector>()};
      if (e.h.size() != c.num_vars || e.k.size() != c.num_vars) throw std::invalid_argument("exponent length mismatch");
      c.terms.emplace_back(std::move(e), parse_rational(t.at("lambda").get<std::string>()));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad handelman certificate: ") + e.what());
  }
}

std::string qm_certificate_to_json(const QuadraticModuleCertificate& cert, CertificateStatus verified) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "quadratic_module";
  j["num_vars"] = cert.num_vars;
  j["order"] = cert.order;
  j["mu"] = to_string(cert.mu);
  j["construction"] = cert.construction;
  j["verified"] = to_string(verified);
  j["sigma0"] = sos_json(cert.sigma0);
  j["sigmas"] = ordered_json::array();
  for (const auto& s : cert.sigmas) j["sigmas"].push_back(sos_json(s));
  return j.dump(2) + "\n";
}

QuadraticModuleCertificate qm_certificate_from_json(const std::string& text) {
  try {
    const auto j = parse(text, "quadratic_module");
    QuadraticModuleCertificate c;
    c.num_vars = j.at("num_vars").get<std::size_t>();
    c.order = j.at("order").get<int>();
    c.mu = parse_rational(j.at("mu").get<std::string>());
    c.construction = j.value("construction", std::string("sdp"));
    c.sigma0 = sos_from(j.at("sigma0"), c.num_vars);
    for (const auto& s : j.at("sigmas")) c.sigmas.push_back(sos_from(s, c.num_vars));
    if (c.sigmas.size() != c.num_vars) throw std::invalid_argument("need one multiplier per variable");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad quadratic module certificate: ") + e.what());
  }
}

std::string preordering_to_json(const PreorderingCertificate& cert, CertificateStatus verified) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "preordering";
  j["num_vars"] = cert.num_vars;
  j["order"] = cert.order;
  j["mu"] = to_string(cert.mu);
  j["verified"] = to_string(verified);
  j["terms"] = ordered_json::array();
  for (const auto& t : cert.terms) {
    ordered_json term{{"h", t.product.h}, {"k", t.product.k}};
    term["sigma"] = sos_json(t.sigma);
    j["terms"].push_back(std::move(term));
  }
  return j.dump(2) + "\n";
}

}  // namespace cubecert
