// radialft: command-line front end for radial Fourier transforms.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radialft/acceptance.hpp"
#include "radialft/diagnostics.hpp"
#include "radialft/error.hpp"
#include "radialft/profiles.hpp"
#include "radialft/report.hpp"
#include "radialft/specfun.hpp"
#include "radialft/transform.hpp"

namespace {

using namespace radialft;
using report::Json;

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kCondition = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "usage"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

struct Options {
  std::string profile;
  std::string profile_file;
  int dim = 3;
  std::optional<double> alpha;
  std::string r_grid;
  std::string N_grid;
  std::string A_grid = "50:400:4:log";
  std::optional<double> tol;
  std::string format;
  std::string out;
  bool force = false;
  std::string method = "eq6";
  int criterion = 0;
};

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4) throw UsageError(std::string(flag) + ": expected start:stop:count[:log]");
  double start = 0.0, stop = 0.0;
  long count = 0;
  try {
    std::size_t used = 0;
    start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("start");
    stop = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("stop");
    count = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": malformed grid '" + text + "'");
  }
  const bool log = parts.size() == 4;
  if (log && parts[3] != "log") throw UsageError(std::string(flag) + ": the optional fourth field must be 'log'");
  if (count < 1) throw UsageError(std::string(flag) + ": grid is empty");
  if (!(start > 0.0) || !(stop >= start) || !std::isfinite(stop))
    throw UsageError(std::string(flag) + ": need 0 < start <= stop");
  if (count == 1 && stop != start) throw UsageError(std::string(flag) + ": a single point needs start == stop");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    grid[static_cast<std::size_t>(i)] = log ? start * std::pow(stop / start, f) : start + (stop - start) * f;
  }
  grid.back() = stop;
  return grid;
}

profiles::RadialProfile load_profile(const Options& o) {
  if (!o.profile.empty() && !o.profile_file.empty()) throw UsageError("give either --profile or --profile-file");
  if (!o.profile.empty()) return profiles::parse_profile(o.profile);
  if (!o.profile_file.empty()) {
    std::ifstream in(o.profile_file);
    if (!in) throw IoError("cannot open profile file " + o.profile_file);
    std::string first;
    std::getline(in, first);
    // A CSV table of knots, or a file holding a profile spec.
    if (first.rfind("t,", 0) == 0) return profiles::RadialProfile::tabulated_file(o.profile_file);
    std::stringstream rest;
    rest << first << '\n' << in.rdbuf();
    return profiles::parse_profile(rest.str());
  }
  throw UsageError("--profile or --profile-file is required");
}

double alpha_of(const Options& o) { return o.alpha.value_or(0.5 * (o.dim - 1)); }

std::string format_of(const Options& o, const std::string& fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
  return f;
}

void emit(const Options& o, const std::string& bytes) {
  if (o.out.empty()) {
    std::cout << bytes;
    std::cout.flush();
    if (!std::cout) throw IoError("failed to write to stdout");
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw IoError("cannot open output file " + o.out);
  f << bytes;
  if (!f) throw IoError("failed to write " + o.out);
}

void check_tolerance(const Options& o, double value, double err, double r) {
  if (o.tol && err > *o.tol * (1.0 + std::abs(value)))
    throw ToleranceError("error estimate " + report::format_double(err) + " exceeds --tol at r = " + report::format_double(r),
                         value, err);
}

void warn_claims(const profiles::RadialProfile& p, int n) {
  for (const auto& w : p.claim_warnings(n)) std::cerr << Json{{"warning", w}}.dump() << "\n";
}

int cmd_transform(const Options& o) {
  const auto profile = load_profile(o);
  const auto radii = parse_grid(o.r_grid, "--r-grid");
  warn_claims(profile, o.dim);
  transform::TransformRequest req{profile, o.dim, alpha_of(o), transform::parse_method(o.method), o.force};
  const auto results = transform::transform_grid(req, radii);
  for (const auto& r : results) check_tolerance(o, r.value, r.err_est, r.r);
  emit(o, format_of(o, "csv") == "csv" ? report::transform_table(results).csv()
                                       : report::dump(report::transform_json(req, results)));
  return kOk;
}

int cmd_invert(const Options& o) {
  const auto profile = load_profile(o);
  const auto radii = parse_grid(o.r_grid, "--r-grid");
  const auto A = parse_grid(o.A_grid, "--A-grid");
  const double alpha = alpha_of(o);
  const auto table = transform::tabulate_transform({profile, o.dim, alpha, transform::Method::eq6, o.force}, A.back());
  report::Table t;
  t.columns = {"r", "f", "err_est", "f0", "A_max"};
  Json rows = Json::array();
  for (double r : radii) {
    const auto inv = transform::inverse_eq5(table, o.dim, alpha, r, A);
    if (inv.diverged) throw DivergenceError("Bochner-Riesz means do not settle at r = " + report::format_double(r));
    check_tolerance(o, inv.value, inv.err_est, r);
    const double f0 = profile.eval(r);
    t.rows.push_back({report::format_double(r), report::format_double(inv.value), report::format_double(inv.err_est),
                      report::format_double(f0), report::format_double(A.back())});
    Json means = Json::array();
    for (const auto& [a, v] : inv.means) means.push_back({{"A", a}, {"mean", report::json_number(v)}});
    rows.push_back({{"r", r},
                    {"f", report::json_number(inv.value)},
                    {"err_est", report::json_number(inv.err_est)},
                    {"f0", report::json_number(f0)},
                    {"means", means}});
  }
  if (format_of(o, "csv") == "csv") {
    emit(o, t.csv());
  } else {
    Json j{{"profile", profile.render()}, {"n", o.dim}, {"alpha", alpha}, {"results", rows}};
    emit(o, report::dump(j));
  }
  return kOk;
}

int cmd_asymptotic(const Options& o) {
  const auto profile = load_profile(o);
  const auto radii = parse_grid(o.r_grid, "--r-grid");
  for (double r : radii)
    if (r < 2.0) throw UsageError("asymptotic: radii must be >= 2");
  const transform::Theorem3Model model(profile, o.dim);
  const auto fh = transform::forward_eq6_grid({profile, o.dim, 0.5 * (o.dim - 1), transform::Method::eq6, o.force}, radii);
  report::Table t;
  t.columns = {"r", "main_term", "envelope", "fhat"};
  Json rows = Json::array();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    t.rows.push_back({report::format_double(r), report::format_double(model.main_term(r)),
                      report::format_double(model.envelope(r)), report::format_double(fh[i].value)});
    rows.push_back({{"r", r},
                    {"main_term", report::json_number(model.main_term(r))},
                    {"envelope", report::json_number(model.envelope(r))},
                    {"fhat", report::json_number(fh[i].value)}});
  }
  if (format_of(o, "csv") == "csv") {
    emit(o, t.csv());
  } else {
    const auto& c = model.constant();
    Json j{{"profile", profile.render()},
           {"n", o.dim},
           {"constant", {{"exponent_base2", c.exponent_base2}, {"exponent_pi", c.exponent_pi}, {"sign_power", c.sign}}},
           {"variation_F", report::json_number(model.variation())},
           {"results", rows}};
    emit(o, report::dump(j));
  }
  return kOk;
}

int cmd_diagnose(const Options& o) {
  const auto profile = load_profile(o);
  auto verdicts = diagnostics::check_conditions(profile, o.dim, alpha_of(o));
  verdicts.push_back(diagnostics::check_condition14(profile, o.dim));
  verdicts.push_back(diagnostics::zygmund_bochkarev(profile, o.dim));
  verdicts.push_back(diagnostics::corollary2_criterion(profile, o.dim));
  if (format_of(o, "json") == "csv") {
    report::Table t;
    t.columns = {"condition", "status", "value", "uncertainty", "slope"};
    for (const auto& v : verdicts)
      t.rows.push_back({diagnostics::condition_name(v.condition), diagnostics::status_name(v.status),
                        report::format_double(v.evidence.value), report::format_double(v.evidence.uncertainty),
                        report::format_double(v.evidence.slope)});
    emit(o, t.csv());
  } else {
    Json arr = Json::array();
    for (const auto& v : verdicts) arr.push_back(report::to_json(v));
    emit(o, report::dump(arr));
  }
  return kOk;
}

int cmd_compare(const Options& o) {
  const auto profile = load_profile(o);
  const auto N = parse_grid(o.N_grid, "--N-grid");
  if (N.front() <= 1.0) throw UsageError("--N-grid values must exceed 1");
  const auto rep = diagnostics::theorem2_compare(profile, o.dim, N);
  if (format_of(o, "json") == "csv") {
    report::Table t;
    t.columns = {"N", "lhs", "rhs", "residual", "residual_printed"};
    for (std::size_t i = 0; i < rep.N_grid.size(); ++i)
      t.rows.push_back({report::format_double(rep.N_grid[i]), report::format_double(rep.lhs[i]),
                        report::format_double(rep.rhs[i]), report::format_double(rep.residual[i]),
                        report::format_double(rep.residual_printed[i])});
    emit(o, t.csv());
  } else {
    Json j = report::to_json(rep);
    j["profile"] = profile.render();
    j["n"] = o.dim;
    emit(o, report::dump(j));
  }
  return kOk;
}

std::optional<std::string> cache_file() {
  const char* dir = std::getenv("RADIALFT_CACHE_DIR");
  if (!dir || !*dir) return std::nullopt;
  return (std::filesystem::path(dir) / "zeta_cache.csv").string();
}

int cmd_kernels(const Options& o) {
  const specfun::KernelParams kp{alpha_of(o), o.dim};
  kp.validate();
  const auto radii = parse_grid(o.r_grid, "--r-grid");
  const auto cache = cache_file();
  if (cache && std::filesystem::exists(*cache)) specfun::load_zeta_cache(*cache);
  const auto cal = specfun::calibrate_zeta(kp);
  if (cache) {
    std::filesystem::create_directories(std::filesystem::path(*cache).parent_path());
    specfun::save_zeta_cache(*cache);
  }
  report::Table t;
  t.columns = {"r", "Q", "q"};
  Json rows = Json::array();
  for (double r : radii) {
    const double Q = specfun::kernel_Q(kp, r);
    const double q = specfun::kernel_q(kp, r);
    t.rows.push_back({report::format_double(r), report::format_double(Q), report::format_double(q)});
    rows.push_back({{"r", r}, {"Q", report::json_number(Q)}, {"q", report::json_number(q)}});
  }
  if (format_of(o, "csv") == "csv") {
    emit(o, t.csv());
  } else {
    Json j{{"alpha", kp.alpha},
           {"n", kp.n},
           {"zeta_closed_form", specfun::zeta_closed_form(kp.n)},
           {"zeta_calibrated", report::json_number(cal.zeta)},
           {"fit_residual", report::json_number(cal.fit_residual)},
           {"results", rows}};
    emit(o, report::dump(j));
  }
  return kOk;
}

int cmd_selftest(const Options& o) {
  std::vector<int> ids = acceptance::criterion_ids();
  if (o.criterion) ids = {o.criterion};
  std::string text;
  bool all = true;
  for (int id : ids) {
    const auto res = acceptance::run_criterion(id);
    all = all && res.passed;
    const auto line = acceptance::format_line(res) + "\n";
    if (o.out.empty()) {
      std::cout << line << std::flush;
    }
    text += line;
  }
  if (!o.out.empty()) emit(o, text);
  return all ? kOk : kNumeric;
}

int exit_code_for(const Error& e) {
  const std::string kind = e.kind();
  if (kind == "usage" || kind == "parse" || kind == "domain") return kUsage;
  if (kind == "condition") return kCondition;
  return kNumeric;
}

void report_error(const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial Fourier transforms via fractional derivatives"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--profile", o.profile, "Profile spec, e.g. \"family=example1 alpha=2 beta=2\"");
    sub->add_option("--profile-file", o.profile_file, "File holding a profile spec or a t,f0 table");
    sub->add_option("--dim", o.dim, "Dimension n")->check(CLI::Range(2, 64));
    sub->add_option("--alpha", o.alpha, "Fractional order (default (n-1)/2)");
    sub->add_option("--tol", o.tol, "Fail when an error estimate exceeds tol*(1+|value|)");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_flag("--force", o.force, "Skip hypothesis checks");
  };

  auto* tr = app.add_subcommand("transform", "Evaluate fhat on a radius grid");
  common(tr);
  tr->add_option("--r-grid", o.r_grid, "start:stop:count[:log]");
  tr->add_option("--method", o.method, "eq6|direct|asymptotic|auto");

  auto* inv = app.add_subcommand("invert", "Recover f0 from its transform by Bochner-Riesz means");
  common(inv);
  inv->add_option("--r-grid", o.r_grid, "start:stop:count[:log]");
  inv->add_option("--A-grid", o.A_grid, "Truncation radii start:stop:count[:log]");

  auto* as = app.add_subcommand("asymptotic", "Leading large-r term for profiles supported on [0,1]");
  common(as);
  as->add_option("--r-grid", o.r_grid, "start:stop:count[:log]");

  auto* dg = app.add_subcommand("diagnose", "Check the hypotheses on a profile");
  common(dg);

  auto* cp = app.add_subcommand("compare", "L1 comparison with the one-dimensional sine transform");
  common(cp);
  cp->add_option("--N-grid", o.N_grid, "start:stop:count[:log]");

  auto* kn = app.add_subcommand("kernels", "Tabulate the Bessel moment kernels");
  common(kn);
  kn->add_option("--r-grid", o.r_grid, "start:stop:count[:log]");

  auto* st = app.add_subcommand("selftest", "Run the acceptance suite");
  st->add_option("--criterion", o.criterion, "Run a single criterion")->check(CLI::Range(1, 12));
  st->add_option("--out", o.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kUsage;
  }

  try {
    if (tr->parsed()) return cmd_transform(o);
    if (inv->parsed()) return cmd_invert(o);
    if (as->parsed()) return cmd_asymptotic(o);
    if (dg->parsed()) return cmd_diagnose(o);
    if (cp->parsed()) return cmd_compare(o);
    if (kn->parsed()) return cmd_kernels(o);
    if (st->parsed()) return cmd_selftest(o);
  } catch (const Error& e) {
    report_error(e.kind(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return kNumeric;
  }
  return kUsage;
}
