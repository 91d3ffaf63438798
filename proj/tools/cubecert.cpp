#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cubecert/bounds.hpp"
#include "cubecert/handelman.hpp"
#include "cubecert/harness.hpp"
#include "cubecert/io.hpp"
#include "cubecert/oracle.hpp"
#include "cubecert/sos.hpp"

#include "json.hpp"

using namespace cubecert;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kSolverFailure = 3;
constexpr int kViolations = 4;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::size_t n = 1;
  std::string poly;
  std::string poly_file;
  std::vector<int> orders;
  double tol = -1;
  std::uint64_t seed = 1;
  std::size_t size = 50;
  int degree = 2;
  std::string format = "table";
  std::string out;
};

Polynomial read_polynomial(const Options& o) {
  std::string text = o.poly;
  if (!o.poly_file.empty()) {
    std::ifstream in(o.poly_file);
    if (!in) throw InputError("cannot read " + o.poly_file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  if (text.empty()) throw InputError("no polynomial given (use -p or --poly-file)");
  try {
    return parse_polynomial(text, o.n);
  } catch (const ParseError& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

// With several orders each certificate gets its own file: cert.json -> cert_r4.json.
std::string out_path(const Options& o, int r) {
  if (o.out.empty() || o.orders.size() <= 1) return o.out;
  std::filesystem::path p(o.out);
  return (p.parent_path() / (p.stem().string() + "_r" + std::to_string(r) + p.extension().string())).string();
}

void emit(const std::string& text) {
  std::cout << text;
  std::cout.flush();
}

std::string fixed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

int cmd_bound(const Options& o) {
  const Polynomial p = read_polynomial(o);
  if (o.orders.empty()) throw InputError("bound needs -r");
  const Rational width = from_double(o.tol > 0 ? o.tol : 1e-3);
  BoundInputs in;
  in.n = static_cast<int>(o.n);
  in.m = std::max(p.degree(), 1);
  in.L = p.is_zero() ? Rational(0) : l_norm(p);
  in.pmin = reference_min(p, width);
  in.pmax = reference_max(p, width);
  std::string all;
  for (int r : o.orders) {
    if (r < 1) throw InputError("orders must be positive");
    in.r = r;
    const auto report = bound_table(in);
    all += o.format == "json" ? render_json(report) : render_text(report);
  }
  if (!o.out.empty()) write_file(o.out, all);
  else emit(all);
  return kOk;
}

int cmd_handelman(const Options& o) {
  const Polynomial p = read_polynomial(o);
  if (o.orders.empty()) throw InputError("handelman needs -r");
  int code = kOk;
  for (int r : o.orders) {
    if (r < std::max(p.degree(), 0)) throw InputError("order below the polynomial degree");
    const auto res = handelman_lower_bound(p, r);
    if (!res.mu) {
      std::cout << "r=" << r << " handelman: no representation (LP " << to_string(res.lp.status) << ")\n";
      code = kSolverFailure;
      continue;
    }
    const auto check = verify_handelman(res.certificate, p);
    std::cout << "r=" << r << " mu=" << to_string(*res.mu) << " (" << fixed(to_double(*res.mu)) << ")"
              << " verified=" << (check.ok ? "exact" : "failed") << "\n";
    if (!check.ok) {
      std::cerr << "verification: " << check.diagnostic << "\n";
      code = kSolverFailure;
    }
    const auto path = out_path(o, r);
    if (!path.empty()) write_file(path, handelman_to_json(res.certificate));
  }
  return code;
}

SosOptions sos_options(const Options& o) {
  SosOptions s;
  if (o.tol > 0) s.verify_tol = o.tol;
  return s;
}

template <class Result>
int report_sos(const char* name, int r, const Result& res, std::string json, const std::string& path) {
  if (!res.mu || !res.converged()) {
    std::cout << "r=" << r << " " << name << ": solver status " << to_string(res.status) << "\n";
    return kSolverFailure;
  }
  std::cout << "r=" << r << " mu=" << fixed(*res.mu) << " gap=" << res.gap << " bound=" << fixed(res.lower_bound())
            << " verified=" << to_string(res.verification.status) << " residual=" << res.verification.max_residual
            << " iterations=" << res.iterations << "\n";
  if (!path.empty()) write_file(path, json);
  return res.verification.ok ? kOk : kSolverFailure;
}

int cmd_putinar(const Options& o) {
  const Polynomial p = read_polynomial(o);
  if (o.orders.empty()) throw InputError("putinar needs -r");
  int code = kOk;
  for (int r : o.orders) {
    if (r < 2 || r < p.degree()) throw InputError("putinar needs r >= max(2, deg p)");
    const auto res = putinar_lower_bound(p, r, sos_options(o));
    const int c = report_sos("putinar", r, res, qm_certificate_to_json(res.certificate, res.verification.status),
                             out_path(o, r));
    if (c != kOk) code = c;
  }
  return code;
}

int cmd_schmudgen(const Options& o) {
  const Polynomial p = read_polynomial(o);
  if (o.orders.empty()) throw InputError("schmudgen needs -r");
  if (o.n > 3) throw InputError("schmudgen supports n <= 3");
  int code = kOk;
  for (int r : o.orders) {
    if (r < p.degree()) throw InputError("order below the polynomial degree");
    const auto res = schmudgen_lower_bound(p, r, sos_options(o));
    const int c = report_sos("schmudgen", r, res, preordering_to_json(res.certificate, res.verification.status),
                             out_path(o, r));
    if (c != kOk) code = c;
  }
  return code;
}

int cmd_check_conjecture(const Options& o) {
  const std::size_t n = o.n;
  if (n % 2 != 0 || n == 0 || n > 4) throw InputError("check-conjecture needs even n <= 4");
  std::vector<int> orders = o.orders.empty() ? std::vector<int>{static_cast<int>(n)} : o.orders;
  const Rational cn(1, static_cast<long>(n * (n + 2)));
  int code = kOk;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (int r : orders) {
    if (r < static_cast<int>(n) || r > 6) throw InputError("check-conjecture needs n <= r <= 6");
    const auto minimal = min_constant(n, r, sos_options(o));
    Polynomial target = Polynomial::monomial(ExponentVector(n, 1)) + Polynomial(n, cn);
    const auto member = check_membership(target, r, sos_options(o));
    const char* rational =
        member.certificate ? (member.certificate->is_exact() && member.verification.ok ? "exact" : "float") : "none";
    if (o.format == "json") {
      runs.push_back({{"n", n},
                      {"r", r},
                      {"conjectured", to_string(cn)},
                      {"min_constant", minimal.value},
                      {"min_constant_gap", minimal.gap},
                      {"min_constant_status", to_string(minimal.status)},
                      {"membership", to_string(member.outcome)},
                      {"margin", member.margin},
                      {"certificate", rational}});
    } else {
      std::cout << "n=" << n << " r=" << r << " conjectured C_n=" << to_string(cn) << "\n"
                << "  min_constant=" << fixed(minimal.value) << " gap=" << minimal.gap << " ("
                << to_string(minimal.status) << ")\n"
                << "  membership of x1...xn + " << to_string(cn) << ": " << to_string(member.outcome)
                << " margin=" << member.margin << " certificate=" << rational << "\n";
    }
    if (member.certificate && !o.out.empty()) {
      write_file(out_path(o, r), qm_certificate_to_json(*member.certificate, member.verification.status));
    }
    if (minimal.status != SdpStatus::optimal || member.outcome == MembershipResult::Outcome::unknown) {
      code = kSolverFailure;
    }
  }
  if (o.format == "json") {
    nlohmann::ordered_json j{{"format_version", kFormatVersion}, {"runs", runs}};
    std::cout << j.dump(2) << "\n";
  }
  return code;
}

int cmd_validate(const Options& o) {
  ValidationConfig config;
  config.suite.seed = o.seed;
  config.suite.size = o.size;
  config.suite.num_vars = o.n;
  config.suite.degree = o.degree;
  if (!o.orders.empty()) config.orders = o.orders;
  if (o.tol > 0) config.tolerance = o.tol;
  for (int r : config.orders) {
    if (r < std::max(2, o.degree)) throw InputError("validate needs every r >= max(2, degree)");
  }
  const auto rows = run_validation(config);
  const std::string csv = render_csv(rows);
  if (!o.out.empty()) write_file(o.out, csv);
  else emit(csv);

  std::size_t violations = 0;
  std::size_t failures = 0;
  for (const auto& row : rows) {
    if (!row.violations.empty()) ++violations;
    if (row.solver_failure) ++failures;
  }
  std::cerr << "instances=" << config.suite.size << " rows=" << rows.size() << " violations=" << violations
            << " solver_failures=" << failures << "\n";
  if (violations > 0) return kViolations;
  if (failures > 0) return kSolverFailure;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified lower bounds for polynomials on the unit hypercube"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_poly) {
    sub->add_option("-n", o.n, "number of variables")->check(CLI::Range(1, 16));
    if (with_poly) {
      auto* inline_poly = sub->add_option("-p", o.poly, "polynomial, e.g. \"x1^2 - x1 + 1\"");
      auto* file = sub->add_option("--poly-file", o.poly_file, "file holding the polynomial");
      inline_poly->excludes(file);
    }
    sub->add_option("-r", o.orders, "relaxation order (repeatable)")->allow_extra_args(false);
    sub->add_option("--tol", o.tol, "tolerance (oracle width for bound, verification otherwise)");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "json", "csv"}));
    sub->add_option("--out", o.out, "output file");
  };

  auto* bound = app.add_subcommand("bound", "degree and error bounds table");
  auto* han = app.add_subcommand("handelman", "exact Handelman LP bound");
  auto* put = app.add_subcommand("putinar", "Putinar SOS bound");
  auto* sch = app.add_subcommand("schmudgen", "Schmudgen SOS bound (n <= 3)");
  auto* conj = app.add_subcommand("check-conjecture", "test x1...xn + 1/(n(n+2)) in the quadratic module");
  auto* val = app.add_subcommand("validate", "random-suite check of the error bounds, CSV output");
  for (auto* s : {bound, han, put, sch}) add_common(s, true);
  add_common(conj, false);
  add_common(val, false);
  val->add_option("--seed", o.seed, "suite seed");
  val->add_option("--size", o.size, "number of instances");
  val->add_option("--degree", o.degree, "degree m of the random polynomials")->check(CLI::Range(1, 8));
  o.n = 1;
  val->preparse_callback([&](std::size_t) { o.n = 2; });
  conj->preparse_callback([&](std::size_t) { o.n = 2; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*bound) return cmd_bound(o);
    if (*han) return cmd_handelman(o);
    if (*put) return cmd_putinar(o);
    if (*sch) return cmd_schmudgen(o);
    if (*conj) return cmd_check_conjecture(o);
    if (*val) return cmd_validate(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kOk;
}
