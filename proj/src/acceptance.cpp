#include "radialft/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "radialft/diagnostics.hpp"
#include "radialft/error.hpp"
#include "radialft/report.hpp"
#include "radialft/specfun.hpp"
#include "radialft/transform.hpp"

namespace radialft::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;

using profiles::RadialProfile;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string fix(double x, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return r;
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

struct OracleStats {
  double max_rel = 0.0;
  int failures = 0;
  int total = 0;
  double smallest_failing_r = std::numeric_limits<double>::infinity();

  void add(double r, double value, double exact, double tol) {
    const double rel = std::abs(value - exact) / std::abs(exact);
    max_rel = std::max(max_rel, rel);
    ++total;
    if (!(rel <= tol)) {
      ++failures;
      smallest_failing_r = std::min(smallest_failing_r, r);
    }
  }
  std::string summary() const {
    std::string s = "max_rel_err=" + sci(max_rel) + " failures=" + std::to_string(failures) + "/" + std::to_string(total);
    if (failures) s += " smallest_failing_r=" + sci(smallest_failing_r);
    return s;
  }
};

CriterionResult gaussian_oracle() {
  const auto start = std::chrono::steady_clock::now();
  OracleStats st;
  const auto radii = log_grid(0.5, 20.0, 20);
  for (int n = 2; n <= 5; ++n) {
    for (double alpha : {0.5 * (n - 1), 0.25 * (n - 1)}) {
      const auto res = transform::forward_eq6_grid({RadialProfile::gaussian(), n, alpha}, radii);
      for (const auto& tr : res) st.add(tr.r, tr.value, std::pow(2.0 * kPi, 0.5 * n) * std::exp(-0.5 * tr.r * tr.r), 1e-6);
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool fast = seconds <= 60.0;
  return {1, "gaussian-oracle", st.failures == 0 && fast, st.summary() + " runtime_within_60s=" + (fast ? "yes" : "no")};
}

CriterionResult poisson_oracle() {
  OracleStats st;
  const auto radii = log_grid(0.5, 20.0, 20);
  for (double alpha : {1.0, 0.5}) {
    const auto res = transform::forward_eq6_grid({RadialProfile::exponential(), 3, alpha}, radii);
    for (const auto& tr : res) st.add(tr.r, tr.value, 8.0 * kPi / std::pow(1.0 + tr.r * tr.r, 2), 1e-6);
  }
  return {2, "poisson-kernel-oracle", st.failures == 0, st.summary()};
}

CriterionResult bochner_riesz_oracle() {
  OracleStats st;
  const auto radii = log_grid(1.0, 50.0, 20);
  for (int n : {2, 3}) {
    const double delta = 0.5 * (n + 1);
    for (double alpha : {0.5 * (n - 1), 0.25 * (n - 1)}) {
      const auto res = transform::forward_eq6_grid({RadialProfile::bochner_riesz(delta), n, alpha}, radii);
      for (const auto& tr : res) {
        const double exact = std::pow(2.0 * kPi, 0.5 * n) * std::pow(2.0, delta) * std::tgamma(delta + 1.0) *
                             std::pow(tr.r, -0.5 * n - delta) * specfun::bessel_j(0.5 * n + delta, tr.r);
        st.add(tr.r, tr.value, exact, 1e-5);
      }
    }
  }
  return {3, "bochner-riesz-oracle", st.failures == 0, st.summary()};
}

CriterionResult kernel_remainder() {
  bool ok = true;
  std::string detail;
  for (auto [n, alpha] : {std::pair{2, 0.5}, std::pair{3, 1.0}, std::pair{5, 2.0}}) {
    const double zeta = specfun::zeta_closed_form(n);
    const auto centres = log_grid(50.0, 5000.0 - 2.0 * kPi, 32);
    std::vector<double> peaks(centres.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < centres.size(); ++i) {
      double peak = 0.0;
      for (int j = 0; j < 16; ++j) {
        const double r = centres[i] + j * kPi / 8.0;
        const double q = specfun::bessel_moment_quadrature(alpha, 0.5 * n - 1.0, 0.5 * n, r);
        const double rem = q - std::tgamma(alpha) * std::pow(r, -alpha) * specfun::bessel_j(0.5 * n + alpha, r) -
                           zeta * std::pow(r, -0.5 * n);
        peak = std::max(peak, std::abs(rem));
      }
      peaks[i] = peak;
    }
    const double slope = slope_loglog(centres, peaks);
    const double expected = -alpha - 1.5;
    ok = ok && std::abs(slope - expected) <= 0.15;
    detail += (detail.empty() ? "" : " ") + std::string("n=") + std::to_string(n) + ",alpha=" + fix(alpha, 1) +
              ":slope=" + fix(slope, 3) + "(expected " + fix(expected, 2) + ")";
  }
  return {4, "kernel-remainder-slope", ok, detail};
}

CriterionResult aux_recursion() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ulam(0.0, 3.0), ur(0.1, 60.0), uu(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double lambda = ulam(rng);
    const double mu_lo = -lambda - 1.0 + 0.25;
    const double mu = mu_lo + (3.0 - mu_lo) * uu(rng);
    const double r = ur(rng);
    const double lhs = specfun::aux_integral(mu, lambda, r);
    const double rhs = specfun::bessel_j(lambda + 1.0, r) / r + (lambda + 1.0 - mu) / r * specfun::aux_integral(mu - 1.0, lambda + 1.0, r);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {5, "aux-integral-recursion", worst < 1e-10, "max_residual=" + sci(worst) + " samples=1000"};
}

CriterionResult theorem3_check() {
  bool ok = true;
  std::string detail;
  for (double beta : {1.02, 1.05}) {
    const auto p = RadialProfile::example1(1.0, beta);
    const auto cal = transform::calibrate_theorem3(p, 3, 100.0, 1000.0, 64);
    double dev = 0.0;
    for (std::size_t i = 0; i < cal.peaks.size(); ++i) dev = std::max(dev, std::abs(cal.fhat[i] / cal.main_term[i] - 1.0));

    const transform::Theorem3Model model(p, 3);
    std::vector<double> radii;
    constexpr double kStep = 0.25;
    for (int k = 0; 2.0 + k * kStep <= 1000.0 + 1e-9; ++k) radii.push_back(2.0 + k * kStep);
    const auto fh = transform::forward_eq6_grid({p, 3, 1.0}, radii);
    double acc = 0.0, at500 = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double v = radii[i] * radii[i] * std::abs(fh[i].value - model.main_term(radii[i]));
      if (i > 0) acc += 0.5 * kStep * (prev + v);
      prev = v;
      if (std::abs(radii[i] - 500.0) < 1e-6) at500 = acc;
    }
    const double growth = acc / at500 - 1.0;
    ok = ok && dev <= 0.05 && growth < 0.05 && growth >= -1e-12;
    detail += (detail.empty() ? "" : " ") + std::string("beta=") + fix(beta, 2) + ":max_ratio_dev=" + sci(dev) +
              ",fitted_base2_exponent=" + fix(cal.fitted_exponent) + ",rms_resid[(n+1)/2]=" + sci(cal.residual_half) +
              ",rms_resid[(n+1)/3]=" + sci(cal.residual_third) + ",budget_growth_500_1000=" + sci(growth);
  }
  return {6, "leading-asymptotics", ok, detail};
}

CriterionResult endpoint_dichotomy() {
  const std::vector<double> edges{25, 50, 100, 200, 400, 800};
  const auto l1 = diagnostics::radial_l1(RadialProfile::example1(1.0, 1.25), 3, edges);
  std::vector<double> tails;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) tails.push_back(l1[i + 1] - l1[i]);
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i + 1 < tails.size(); ++i) worst_ratio = std::max(worst_ratio, tails[i + 1] / tails[i]);
  const bool geometric = worst_ratio <= 0.95;

  const std::vector<double> Ns{50, 100, 200, 400, 800};
  const auto lb = diagnostics::radial_l1(RadialProfile::example1(1.0, 1.0), 3, Ns);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const double x = std::log(Ns[i]);
    sx += x;
    sy += lb[i];
    sxx += x * x;
    sxy += x * lb[i];
  }
  const double m = static_cast<double>(Ns.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double predicted = 32.0 * kPi;
  const bool logfit = std::abs(slope / predicted - 1.0) <= 0.2;
  return {7, "endpoint-l1-dichotomy", geometric && logfit,
          "beta=1.25:tail_ratio_max=" + fix(worst_ratio) + " beta=1.00:log_slope=" + fix(slope, 3) +
              "(predicted " + fix(predicted, 3) + ")"};
}

CriterionResult l1_comparison_boundedness() {
  const std::vector<double> G{10, 30, 100, 300};
  std::vector<double> all = G;
  for (double N : G) all.push_back(2.0 * N);
  const auto rep = diagnostics::theorem2_compare(RadialProfile::example1(2.0, 2.0), 3, all);
  double cg = 0.0, c2g = 0.0;
  for (std::size_t i = 0; i < rep.N_grid.size(); ++i) {
    const double v = std::abs(rep.residual[i]) / rep.residual_bound;
    c2g = std::max(c2g, v);
    if (std::find(G.begin(), G.end(), rep.N_grid[i]) != G.end()) cg = std::max(cg, v);
  }
  const double variation = c2g / cg - 1.0;
  const bool ok = std::isfinite(c2g) && variation <= 0.1;
  double cp = 0.0;
  for (double r : rep.residual_printed) cp = std::max(cp, std::abs(r) / rep.residual_bound);
  return {8, "l1-comparison-boundedness", ok,
          "C(G)=" + fix(cg) + " C(G+2G)=" + fix(c2g) + " variation=" + sci(variation) + " printed_constant_C=" + fix(cp)};
}

CriterionResult loglog_counterexample() {
  const auto p = RadialProfile::remark3();
  const auto verdicts = diagnostics::check_conditions(p, 3, 1.0);
  bool ok = true;
  std::string statuses;
  for (const auto& v : verdicts) {
    ok = ok && v.status == diagnostics::Status::pass;
    statuses += diagnostics::condition_name(v.condition) + "=" + diagnostics::status_name(v.status) + " ";
  }
  const auto c14 = diagnostics::check_condition14(p, 3);
  ok = ok && c14.status == diagnostics::Status::fail;
  statuses += "c14=" + diagnostics::status_name(c14.status);

  constexpr double kStep = 0.25;
  const int count = static_cast<int>(std::lround((1e4 - 1.0) / kStep)) + 1;
  auto inner = transform::sine_transform_uniform([&](double t) { return p.eval(t); }, 0.0, 1.0, {}, 0.5 * kPi, 1.0,
                                                 kStep, count);
  std::vector<double> partial;
  double acc = 0.0;
  for (int k = 1; k < count; ++k) {
    acc += 0.5 * kStep * (std::abs(inner[static_cast<std::size_t>(k - 1)]) + std::abs(inner[static_cast<std::size_t>(k)]));
    const double r = 1.0 + k * kStep;
    if (r == 1e2 || r == 1e3 || r == 1e4) partial.push_back(acc);
  }
  const bool grows = partial.size() == 3 && partial[0] < partial[1] && partial[1] < partial[2];
  return {9, "log-log-counterexample", ok && grows,
          statuses + " partial_1d[1e2,1e3,1e4]=" + fix(partial.at(0)) + "," + fix(partial.at(1)) + "," + fix(partial.at(2))};
}

CriterionResult inversion_round_trip() {
  const std::vector<double> A{50, 100, 200, 400};
  const std::vector<double> radii{0.1, 0.3, 0.5, 0.7, 0.9};
  double worst = 0.0;
  std::string detail;
  for (const auto& p : {RadialProfile::gaussian(), RadialProfile::example1(2.0, 2.0)}) {
    const auto table = transform::tabulate_transform({p, 3, 1.0}, A.back());
    double w = 0.0;
    for (double r : radii) {
      const auto inv = transform::inverse_eq5(table, 3, 1.0, r, A);
      w = std::max(w, std::abs(inv.value - p.eval(r)));
    }
    worst = std::max(worst, w);
    detail += (detail.empty() ? "" : " ") + p.name() + ":max_abs_err=" + sci(w);
  }
  return {10, "inversion-round-trip", worst <= 1e-3, detail};
}

CriterionResult weber_schafheitlin_check() {
  double below = 0.0, above = 0.0;
  for (auto [mu, nu] : {std::pair{0.0, 1.0}, std::pair{0.5, 2.0}, std::pair{1.0, 2.5}, std::pair{-0.5, 1.0}}) {
    for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{3.0, 1.5}, std::pair{1.0, 2.0}, std::pair{1.5, 3.0}}) {
      const auto ws = specfun::weber_schafheitlin(mu, nu, a, b);
      if (b < a) {
        below = std::max(below, std::abs(ws.value));
      } else {
        above = std::max(above, std::abs(ws.value - ws.closed_form));
      }
    }
  }
  return {11, "weber-schafheitlin", below < 1e-4 && above <= 1e-4,
          "max|b<a value|=" + sci(below) + " max|b>a error|=" + sci(above)};
}

std::string determinism_payload() {
  transform::TransformRequest req{RadialProfile::example1(2.0, 2.0), 3, 0.5, transform::Method::automatic};
  const auto radii = log_grid(0.5, 50.0, 40);
  std::string out = report::transform_table(transform::transform_grid(req, radii)).csv();
  report::Json j = report::Json::array();
  for (const auto& v : diagnostics::check_conditions(RadialProfile::remark3(), 3, 1.0)) j.push_back(report::to_json(v));
  return out + report::dump(j);
}

CriterionResult determinism() {
  const auto first = determinism_payload();
  const auto second = determinism_payload();
  const auto radii = log_grid(0.5, 50.0, 40);
  transform::TransformRequest req{RadialProfile::exponential(), 4, 0.75};
  const auto par = report::transform_table(transform::forward_eq6_grid(req, radii)).csv();
  const auto ser = report::transform_table(transform::forward_eq6_grid_serial(req, radii)).csv();
  const bool same = first == second;
  const bool twin = par == ser;
  return {12, "determinism", same && twin,
          std::string("repeat_identical=") + (same ? "yes" : "no") + " parallel_matches_serial=" + (twin ? "yes" : "no")};
}

}  // namespace

std::vector<int> criterion_ids() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}; }

CriterionResult run_criterion(int id) {
  try {
    switch (id) {
      case 1: return gaussian_oracle();
      case 2: return poisson_oracle();
      case 3: return bochner_riesz_oracle();
      case 4: return kernel_remainder();
      case 5: return aux_recursion();
      case 6: return theorem3_check();
      case 7: return endpoint_dichotomy();
      case 8: return l1_comparison_boundedness();
      case 9: return loglog_counterexample();
      case 10: return inversion_round_trip();
      case 11: return weber_schafheitlin_check();
      case 12: return determinism();
      default: break;
    }
  } catch (const Error& e) {
    return {id, "criterion-" + std::to_string(id), false, std::string("error: ") + e.what()};
  }
  throw DomainError("unknown acceptance criterion " + std::to_string(id));
}

std::string format_line(const CriterionResult& result) {
  return std::string(result.passed ? "PASS " : "FAIL ") + std::to_string(result.id) + " " + result.name + ": " +
         result.detail;
}

}  // namespace radialft::acceptance
