#include "cubecert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cubecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double up(double x) { return std::isfinite(x) ? std::nextafter(x, kInf) : x; }
double down(double x) { return std::isfinite(x) ? std::nextafter(x, -kInf) : x; }

Rational ipow(int base, int e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return Rational(out);
}

BoundValue exact_value(const Rational& v) {
  BoundValue b;
  b.exact = v;
  b.value = round_up(v);
  return b;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

bool is_power_of_two(int r) { return r > 0 && (r & (r - 1)) == 0; }

int log2_exact(int r) {
  int k = 0;
  while ((1 << k) < r) ++k;
  return k;
}

// ceil(exp(e)) for a rational exponent, rounded so it never under-reports.
BoundValue ceil_exp(const Rational& e) {
  BoundValue b;
  const double v = up(std::exp(round_up(e)));
  b.value = std::ceil(v);
  if (std::isfinite(b.value) && b.value < 9007199254740992.0) b.exact = Rational(Integer(b.value));
  return b;
}

}  // namespace

bool BoundValue::valid() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const BoundCondition& c) { return c.holds; });
}

BoundValue schmudgen_error(int m, int n, const Rational& L, int r) {
  if (r < 1) throw std::domain_error("relaxation order must be positive");
  BoundValue b = exact_value(ipow(m, 3) * ipow(n, m + 1) * L / (6 * r));
  b.conditions.push_back({"r >= m n", r >= m * n});
  return b;
}

BoundValue putinar_error(int m, int n, const Rational& L, int r, const Rational& range) {
  if (r < 2) throw std::domain_error("the Putinar error bound needs r >= 2 (log2 r > 0)");
  const Rational k = Rational(3, 2) * L * Rational(binomial(static_cast<unsigned>(m + 1), 3)) * ipow(n, m + 1);
  const Rational tail = range / (r + 2);
  BoundValue b;
  if (is_power_of_two(r)) {
    b = exact_value(k / log2_exact(r) + tail);
  } else {
    b.value = up(up(round_up(k) / down(std::log2(static_cast<double>(r)))) + round_up(tail));
  }
  b.conditions.push_back({"r >= m", r >= m});
  const double two_n = std::ldexp(1.0, n);
  b.conditions.push_back({"r >= max(m, 2^n)", r >= m && static_cast<double>(r) >= two_n});
  return b;
}

BoundValue putinar_degree(int m, int n, const Rational& L, const Rational& pmin) {
  if (pmin <= 0) {
    BoundValue b;
    b.value = kInf;
    b.conditions.push_back({"p_min > 0", false});
    return b;
  }
  BoundValue b = ceil_exp(ipow(m, 3) * ipow(n, m + 1) * L / pmin);
  b.conditions.push_back({"p_min > 0", true});
  return b;
}

BoundValue ns_degree(int m, int n, const Rational& L, const Rational& pmin, double c) {
  BoundValue b;
  b.conditions.push_back({"c > 0", c > 0});
  b.conditions.push_back({"p_min > 0", pmin > 0});
  if (pmin <= 0 || c <= 0) {
    b.value = kInf;
    return b;
  }
  const double e = round_up(ipow(m, 2) * ipow(n, m) * L / pmin);
  b.value = up(c * up(std::exp(up(std::pow(e, c)))));
  return b;
}

BoundValue ns_error(int m, int n, const Rational& L, double r, double c) {
  BoundValue b;
  b.conditions.push_back({"c > 0", c > 0});
  b.conditions.push_back({"r > c", r > c});
  const double threshold = c * std::exp(std::pow(2.0 * m * m * std::pow(n, m), c));
  b.conditions.push_back({"r >= c exp((2 m^2 n^m)^c)", r >= threshold});
  if (c <= 0 || r <= c) {
    b.value = kInf;
    return b;
  }
  const double num = round_up(6 * ipow(m, 3) * ipow(n, 2 * m) * L);
  const double den = down(std::pow(down(std::log(r / c)), 1.0 / c));
  b.value = den > 0 ? up(num / den) : kInf;
  return b;
}

BoundValue archimedean_M(int n, const Rational& epsilon) {
  const Rational a = (1 - epsilon) * (1 - epsilon) + 1;
  BoundValue b = exact_value(n * a * a / 4);
  b.conditions.push_back({"0 < epsilon < 1", epsilon > 0 && epsilon < 1});
  return b;
}

PmaxUpper pmax_upper(const Rational& L, int m, int n) {
  if (n < 1 || m < 0) throw std::domain_error("pmax_upper needs n >= 1 and m >= 0");
  PmaxUpper out;
  out.coarse = L * ipow(n, m + 1);
  out.geometric = n == 1 ? Rational(L * (m + 1)) : Rational(L * (ipow(n, m + 1) - 1) / (n - 1));
  return out;
}

BoundReport bound_table(const BoundInputs& in) {
  BoundReport rep;
  rep.inputs = in;
  const int m = in.m;
  const int n = in.n;
  const int r = in.r;
  const Rational& L = in.L;
  const Rational pmin = in.pmin.lo;
  const Rational range = std::max(Rational(0), Rational(in.pmax.hi - in.pmin.lo));
  const bool positive = pmin > 0;
  const BoundCondition quadratic{"m = 2", m == 2};
  const BoundCondition pos{"p_min > 0", positive};

  auto degree_ratio = [&](const Rational& coeff) {
    BoundValue b;
    if (positive) b = exact_value(coeff * L / pmin);
    else b.value = kInf;
    return b;
  };
  auto add = [&](const char* rep_name, const char* param, const char* column, const char* formula, BoundValue b,
                 std::vector<BoundCondition> extra) {
    for (auto& c : extra) b.conditions.push_back(std::move(c));
    rep.cells.push_back({rep_name, param, column, formula, std::move(b)});
  };

  add("schmudgen", "degree", "quadratic", "n^2 L/pmin", degree_ratio(ipow(n, 2)), {quadratic, pos});
  add("schmudgen", "degree", "general", "m^3 n^(m+1) L/(6 pmin)", degree_ratio(ipow(m, 3) * ipow(n, m + 1) / 6), {pos});
  add("schmudgen", "degree", "ns", "m^4 n^m L/pmin", degree_ratio(ipow(m, 4) * ipow(n, m)), {pos});

  add("schmudgen", "error", "quadratic", "n^2 L/r", exact_value(ipow(n, 2) * L / r),
      {quadratic, {"r >= 2n", r >= 2 * n}});
  add("schmudgen", "error", "general", "m^3 n^(m+1) L/(6r)", schmudgen_error(m, n, L, r), {});
  add("schmudgen", "error", "ns", "m^4 n^(2m) L/r", exact_value(ipow(m, 4) * ipow(n, 2 * m) * L / r),
      {{"r >= m n^m", Rational(r) >= m * ipow(n, m)}});

  auto exp_cell = [&](const Rational& coeff) {
    BoundValue b;
    b.value = positive ? up(std::exp(round_up(coeff * L / pmin))) : kInf;
    return b;
  };
  add("putinar", "degree", "quadratic", "exp(2n L/pmin)", exp_cell(Rational(2 * n)), {quadratic, pos});
  add("putinar", "degree", "general", "exp(m^3 n^(m+1) L/pmin)", exp_cell(ipow(m, 3) * ipow(n, m + 1)), {pos});
  add("putinar", "degree", "ns", "exp(m^2 n^m L/pmin)", exp_cell(ipow(m, 2) * ipow(n, m)), {pos});

  const double two_n = std::ldexp(1.0, n);
  auto log_cell = [&](const Rational& coeff) {
    BoundValue b;
    if (r < 2) {
      b.value = kInf;
      b.conditions.push_back({"r >= 2", false});
      return b;
    }
    const Rational tail = range / (r + 2);
    if (is_power_of_two(r)) {
      b = exact_value(coeff * L / log2_exact(r) + tail);
    } else {
      b.value = up(up(round_up(coeff * L) / down(std::log2(static_cast<double>(r)))) + round_up(tail));
    }
    return b;
  };
  add("putinar", "error", "quadratic", "n L/log2 r + (pmax - pmin)/(r+2)", log_cell(Rational(n)),
      {quadratic, {"r >= 2^n", static_cast<double>(r) >= two_n}});
  add("putinar", "error", "general", "m^3 n^(m+1) L/(4 log2 r) + (pmax - pmin)/(r+2)",
      log_cell(ipow(m, 3) * ipow(n, m + 1) / 4), {{"r >= max(m, 2^n)", r >= m && static_cast<double>(r) >= two_n}});
  add("putinar", "error", "ns", "6 m^3 n^(2m) L/log r", ns_error(m, n, L, static_cast<double>(r), in.c), {});

  rep.putinar_error_theorem = r >= 2 ? putinar_error(m, n, L, r, range) : BoundValue{kInf, {}, {{"r >= 2", false}}};
  rep.putinar_degree_theorem = putinar_degree(m, n, L, pmin);
  rep.schmudgen_error_general = schmudgen_error(m, n, L, r);
  rep.pmax_bound = pmax_upper(L, m, n);

  const double sq = rep.cells[3].bound.value;
  const double sg = rep.cells[4].bound.value;
  if (sg > 0) rep.notes.emplace_back("schmudgen_error_quadratic_over_general", sq / sg);
  const double theorem_coeff = 1.5 * to_double(Rational(binomial(static_cast<unsigned>(m + 1), 3)));
  const double table_coeff = std::pow(m, 3) / 4.0;
  rep.notes.emplace_back("putinar_error_coefficient_theorem_over_table", theorem_coeff / table_coeff);
  return rep;
}

namespace {

std::string cell_text(const BoundValue& b) {
  std::string s = std::isfinite(b.value) ? fmt("%.6g", b.value) : "inf";
  if (b.valid()) return s + " [ok]";
  std::string why;
  for (const auto& c : b.conditions) {
    if (c.holds) continue;
    if (!why.empty()) why += "; ";
    why += c.text;
  }
  return s + " [invalid: " + why + "]";
}

std::string interval_text(const Enclosure& e) { return "[" + to_string(e.lo) + ", " + to_string(e.hi) + "]"; }

nlohmann::ordered_json value_json(const BoundValue& b) {
  nlohmann::ordered_json j;
  j["value"] = std::isfinite(b.value) ? nlohmann::ordered_json(b.value) : nlohmann::ordered_json(nullptr);
  if (b.exact) j["exact"] = to_string(*b.exact);
  j["valid"] = b.valid();
  j["conditions"] = nlohmann::ordered_json::array();
  for (const auto& c : b.conditions) j["conditions"].push_back({{"text", c.text}, {"holds", c.holds}});
  return j;
}

}  // namespace

std::string render_text(const BoundReport& rep) {
  const auto& in = rep.inputs;
  std::ostringstream out;
  out << "m=" << in.m << " n=" << in.n << " L=" << to_string(in.L) << " r=" << in.r
      << " pmin=" << interval_text(in.pmin) << " pmax=" << interval_text(in.pmax) << " c=" << in.c << "\n\n";
  const std::vector<std::string> columns{"quadratic (m=2)", "general (m>=1)", "ns (c=1)"};
  std::vector<std::vector<std::string>> grid;
  grid.push_back({"representation", "bound", columns[0], columns[1], columns[2]});
  for (std::size_t row = 0; row < 4; ++row) {
    const auto& first = rep.cells[row * 3];
    std::vector<std::string> line{first.representation, first.parameter};
    for (std::size_t c = 0; c < 3; ++c) line.push_back(cell_text(rep.cells[row * 3 + c].bound));
    grid.push_back(line);
  }
  std::vector<std::size_t> width(5, 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << "\n";
  }
  out << "\nformulas:\n";
  for (const auto& cell : rep.cells) {
    out << "  " << cell.representation << "/" << cell.parameter << "/" << cell.column << ": " << cell.formula << "\n";
  }
  out << "\nputinar error (3/2 C(m+1,3) form): " << cell_text(rep.putinar_error_theorem) << "\n";
  out << "putinar degree (ceil exp form):     " << cell_text(rep.putinar_degree_theorem) << "\n";
  out << "pmax upper: " << to_string(rep.pmax_bound.geometric) << " (coarse " << to_string(rep.pmax_bound.coarse)
      << ")\n";
  for (const auto& [name, v] : rep.notes) out << name << ": " << fmt("%.6g", v) << "\n";
  return out.str();
}

std::string render_json(const BoundReport& rep) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  const auto& in = rep.inputs;
  j["inputs"] = {{"m", in.m},
                 {"n", in.n},
                 {"L", to_string(in.L)},
                 {"r", in.r},
                 {"pmin", {to_string(in.pmin.lo), to_string(in.pmin.hi)}},
                 {"pmax", {to_string(in.pmax.lo), to_string(in.pmax.hi)}},
                 {"c", in.c}};
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& cell : rep.cells) {
    nlohmann::ordered_json c{{"representation", cell.representation},
                             {"parameter", cell.parameter},
                             {"column", cell.column},
                             {"formula", cell.formula}};
    c.update(value_json(cell.bound));
    j["cells"].push_back(c);
  }
  j["putinar_error_theorem"] = value_json(rep.putinar_error_theorem);
  j["putinar_degree_theorem"] = value_json(rep.putinar_degree_theorem);
  j["schmudgen_error_general"] = value_json(rep.schmudgen_error_general);
  j["pmax_upper"] = {{"geometric", to_string(rep.pmax_bound.geometric)}, {"coarse", to_string(rep.pmax_bound.coarse)}};
  j["notes"] = nlohmann::ordered_json::object();
  for (const auto& [name, v] : rep.notes) j["notes"][name] = v;
  return j.dump(2) + "\n";
}

}  // namespace cubecert
