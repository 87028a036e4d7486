#include "radialft/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "radialft/error.hpp"
#include "radialft/fraccalc.hpp"
#include "radialft/quad.hpp"
#include "radialft/transform.hpp"

namespace radialft::diagnostics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct LineFit {
  double slope = 0.0;
  double sigma = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  LineFit out;
  if (x.size() < 2) return out;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  out.slope = sxy / sxx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double res = y[i] - my - out.slope * (x[i] - mx);
      rss += res * res;
    }
    out.sigma = std::sqrt(rss / (m - 2.0) / sxx);
  }
  return out;
}

quad::QuadratureSpec block_spec() {
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  spec.abs_tol = 1e-300;
  spec.strict = false;
  return spec;
}

// ∫ g over [2^-(k+1), 2^-k] for k = 1..count, integrated in the log variable.
std::vector<double> dyadic_masses(const std::function<double(double)>& g, int count) {
  std::vector<double> masses(static_cast<std::size_t>(count));
  const auto spec = block_spec();
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 1; k <= count; ++k) {
    const double x0 = -(k + 1) * std::numbers::ln2;
    const double x1 = -k * std::numbers::ln2;
    masses[static_cast<std::size_t>(k - 1)] =
        quad::integrate_adaptive([&](double x) { const double u = std::exp(x); return g(u) * u; }, x0, x1, spec).value;
  }
  return masses;
}

ConditionVerdict from_blocks(ConditionId id, double head, const std::vector<double>& masses) {
  const auto cls = classify_blocks(masses);
  ConditionVerdict v;
  v.condition = id;
  v.status = cls.status;
  v.evidence.value = head + cls.sum;
  v.evidence.uncertainty = cls.uncertainty;
  v.evidence.slope = cls.slope;
  return v;
}

ConditionVerdict verdict(ConditionId id, Status s, double value, double uncertainty = 0.0, double slope = 0.0) {
  return {id, s, {value, uncertainty, slope}};
}

// Decides lim_{t->inf} g(t) = 0 from samples at t = 2^j.
ConditionVerdict limit_at_infinity(ConditionId id, const std::function<double(double)>& g) {
  constexpr int kLevels = 60;
  constexpr int kWindow = 10;
  std::vector<double> v(kLevels + 1);
  for (int j = 0; j <= kLevels; ++j) v[static_cast<std::size_t>(j)] = std::abs(g(std::ldexp(1.0, j)));
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, x);
  double tail_peak = 0.0;
  for (int j = kLevels - kWindow + 1; j <= kLevels; ++j) tail_peak = std::max(tail_peak, v[static_cast<std::size_t>(j)]);
  if (!std::isfinite(tail_peak)) return verdict(id, Status::fail, tail_peak);
  if (tail_peak <= 1e-13 * (1.0 + peak)) return verdict(id, Status::pass, tail_peak);
  std::vector<double> x, y;
  for (int j = kLevels - kWindow + 1; j <= kLevels; ++j) {
    const double val = v[static_cast<std::size_t>(j)];
    if (val > 0.0) {
      x.push_back(j * std::numbers::ln2);
      y.push_back(std::log(val));
    }
  }
  const auto fit = fit_line(x, y);
  const double last = v.back();
  if (fit.slope + 3.0 * fit.sigma < 0.0) return verdict(id, Status::pass, last, 3.0 * fit.sigma, fit.slope);
  if (fit.slope - 3.0 * fit.sigma > -0.01) return verdict(id, Status::fail, last, 3.0 * fit.sigma, fit.slope);
  return verdict(id, Status::undetermined, last, 3.0 * fit.sigma, fit.slope);
}

// Grid modulus of continuity max over windows of w steps, by sliding max/min.
double window_oscillation(const std::vector<double>& v, std::size_t w) {
  std::deque<std::size_t> hi, lo;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    while (!hi.empty() && v[hi.back()] <= v[i]) hi.pop_back();
    while (!lo.empty() && v[lo.back()] >= v[i]) lo.pop_back();
    hi.push_back(i);
    lo.push_back(i);
    while (hi.front() + w < i) hi.pop_front();
    while (lo.front() + w < i) lo.pop_front();
    best = std::max(best, v[hi.front()] - v[lo.front()]);
  }
  return best;
}

std::pair<double, double> sample_range(const profiles::RadialProfile& profile) {
  if (profile.support_end()) return {0.0, *profile.support_end()};
  if (profile.tail_power()) throw DomainError("profile with a power-law tail has no finite sampling range");
  return {0.0, 1.25 * profile.decay_scale()};
}

double trapezoid_cumulative_at(const std::vector<double>& cumulative, double r0, double dr, double N) {
  const double pos = (N - r0) / dr;
  const auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(cumulative.size() - 1)));
  if (i + 1 >= cumulative.size()) return cumulative.back();
  const double frac = pos - static_cast<double>(i);
  return cumulative[i] + frac * (cumulative[i + 1] - cumulative[i]);
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& y, double dr) {
  std::vector<double> c(y.size(), 0.0);
  for (std::size_t i = 1; i < y.size(); ++i) c[i] = c[i - 1] + 0.5 * dr * (y[i - 1] + y[i]);
  return c;
}

double growth_vs_log(const std::vector<double>& N, const std::vector<double>& v) {
  std::vector<double> x;
  for (double n : N) x.push_back(std::log(n));
  return fit_line(x, v).slope;
}

}  // namespace

std::string condition_name(ConditionId c) {
  switch (c) {
    case ConditionId::c1: return "c1";
    case ConditionId::c2: return "c2";
    case ConditionId::c3: return "c3";
    case ConditionId::c4: return "c4";
    case ConditionId::c14: return "c14";
    case ConditionId::c15: return "c15";
    case ConditionId::c20: return "c20";
  }
  return "unknown";
}

std::string status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::undetermined: return "undetermined";
  }
  return "unknown";
}

BlockClassification classify_blocks(const std::vector<double>& masses) {
  BlockClassification out;
  for (double m : masses) out.sum += m;
  if (masses.empty()) return out;
  const std::size_t K = masses.size();
  const std::size_t start = K - std::max<std::size_t>(4, K / 2);
  bool vanishes = true;
  for (std::size_t i = start; i < K; ++i) vanishes = vanishes && masses[i] == 0.0;
  if (vanishes) {
    out.status = Status::pass;
    out.geometric = true;
    return out;
  }
  std::vector<double> k, lk, y2, ye;
  for (std::size_t i = start; i < K; ++i) {
    if (!(masses[i] > 0.0)) continue;
    const double idx = static_cast<double>(i + 1);
    k.push_back(idx);
    lk.push_back(std::log(idx));
    y2.push_back(std::log2(masses[i]));
    ye.push_back(std::log(masses[i]));
  }
  if (k.size() < 3) return out;
  const double last = masses[K - 1];

  const auto geo = fit_line(k, y2);
  const double s = -geo.slope;
  if (s > std::max(0.15, 3.0 * geo.sigma)) {
    const double q = std::exp2(-s);
    out.status = Status::pass;
    out.geometric = true;
    out.slope = s;
    out.tail = last * q / (1.0 - q);
    out.uncertainty = out.tail + 1e-9 * out.sum;
    out.sum += out.tail;
    return out;
  }
  const auto pw = fit_line(lk, ye);
  const double p = -pw.slope;
  out.slope = p;
  if (p > 1.0 + std::max(0.1, 3.0 * pw.sigma)) {
    out.status = Status::pass;
    out.tail = last * static_cast<double>(K) / (p - 1.0);
    out.uncertainty = out.tail;
    out.sum += out.tail;
  } else if (p + 3.0 * pw.sigma < 1.1) {
    out.status = Status::fail;
    out.tail = kInf;
    out.uncertainty = 3.0 * pw.sigma;
  } else {
    out.uncertainty = 3.0 * pw.sigma;
  }
  return out;
}

std::vector<ConditionVerdict> check_conditions(const profiles::RadialProfile& profile, int n, double alpha) {
  const auto order = fraccalc::FractionalOrder::of(alpha);
  std::vector<ConditionVerdict> out;

  const auto lac = profile.locally_absolutely_continuous(order.alpha_star);
  out.push_back(verdict(ConditionId::c1, !lac ? Status::undetermined : (*lac ? Status::pass : Status::fail),
                        lac ? (*lac ? 1.0 : 0.0) : 0.5));

  if (profile.support_end()) {
    out.push_back(verdict(ConditionId::c2, Status::pass, 0.0));
  } else {
    ConditionVerdict worst = verdict(ConditionId::c2, Status::pass, 0.0);
    for (int p = 0; p <= order.alpha_star; ++p) {
      auto v = limit_at_infinity(ConditionId::c2, [&](double t) {
        const double d = p == 0 ? profile.eval(t) : profile.derivative(p, t).value;
        return d == 0.0 ? 0.0 : std::pow(t, p) * d;
      });
      if (v.status == Status::fail || (v.status == Status::undetermined && worst.status == Status::pass)) worst = v;
    }
    out.push_back(worst);
  }

  fraccalc::FractionalDerivativeResult F;
  try {
    F = fraccalc::build_F(profile, order, n);
  } catch (const Error&) {
    out.push_back(verdict(ConditionId::c3, Status::undetermined, kInf));
    out.push_back(verdict(ConditionId::c4, Status::undetermined, kInf));
    return out;
  }
  if (profile.support_end()) {
    out.push_back(verdict(ConditionId::c3, Status::pass, 0.0));
  } else {
    ConditionVerdict v = verdict(ConditionId::c3, Status::undetermined, kInf);
    try {
      v = limit_at_infinity(ConditionId::c3, F.F);
    } catch (const DivergenceError&) {
      v = verdict(ConditionId::c3, Status::fail, kInf);
    }
    out.push_back(v);
  }

  fraccalc::VariationEstimate var;
  double extra = 0.0;
  try {
    if (profile.support_end()) {
      var = fraccalc::total_variation(F.F, {0.0, *profile.support_end()});
    } else {
      const double hi = profile.tail_power() ? 1e6 : 1.25 * profile.decay_scale();
      var = fraccalc::total_variation(F.F, {1e-9, hi});
      extra = std::abs(F(1e-9)) + std::abs(F(hi));
    }
  } catch (const DivergenceError&) {
    out.push_back(verdict(ConditionId::c4, Status::fail, kInf));
    return out;
  }
  const double total = var.total_variation + extra;
  out.push_back(verdict(ConditionId::c4, var.converged && std::isfinite(total) ? Status::pass : Status::undetermined,
                        total, 1e-4 * total));
  return out;
}

ConditionVerdict check_condition14(const std::function<double(double)>& F) {
  const double head = quad::integrate_adaptive([&](double t) { return std::abs(F(t)) / t; }, 0.5, 1.0, block_spec()).value;
  const auto masses = dyadic_masses([&](double t) { return std::abs(F(t)) / t; }, 1000);
  return from_blocks(ConditionId::c14, head, masses);
}

ConditionVerdict check_condition14(const profiles::RadialProfile& profile, int n) {
  const auto F = fraccalc::build_F(profile, fraccalc::FractionalOrder::of(0.5 * (n - 1)), n);
  return check_condition14(F.F);
}

ConditionVerdict zygmund_bochkarev_series(const std::function<double(double)>& omega_of_k, long k_max) {
  if (k_max < 16) throw DomainError("zygmund_bochkarev: k_max must be >= 16");
  std::vector<double> masses;
  double partial = 0.0;
  for (long lo = 1; lo <= k_max; lo *= 2) {
    const long hi = std::min(2 * lo - 1, k_max);
    double block = 0.0;
    for (long k = lo; k <= hi; ++k) block += std::sqrt(std::max(0.0, omega_of_k(static_cast<double>(k)))) / k;
    if (hi == 2 * lo - 1) {
      masses.push_back(block);
    } else {
      partial += block;
    }
  }
  auto v = from_blocks(ConditionId::c15, partial, masses);
  return v;
}

ConditionVerdict zygmund_bochkarev(const profiles::RadialProfile& profile, int n, long k_max) {
  const auto end = profile.support_end();
  if (!end) return verdict(ConditionId::c15, Status::undetermined, kInf);
  const auto F = fraccalc::build_F(profile, fraccalc::FractionalOrder::of(0.5 * (n - 1)), n);

  constexpr int kLog2Grid = 16;
  const std::size_t M = (std::size_t{1} << kLog2Grid) + 1;
  std::vector<double> v(M);
  const auto count = static_cast<std::ptrdiff_t>(M);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] = F(*end * static_cast<double>(i) / static_cast<double>(M - 1));

  // Modulus on the ladder delta_j = end 2^-j, resolved while the window has
  // at least 8 grid steps.
  std::vector<double> ld, lw;
  for (int j = 0; j <= kLog2Grid - 3; ++j) {
    ld.push_back(std::log(*end) - j * std::numbers::ln2);
    lw.push_back(std::log(std::max(window_oscillation(v, std::size_t{1} << (kLog2Grid - j)), 1e-300)));
  }
  const double full = std::exp(lw.front());
  const double tail_exp = std::clamp((lw[lw.size() - 2] - lw.back()) / std::numbers::ln2, 0.0, 1.0);
  auto omega = [&](double k) {
    const double ldelta = -std::log(k);
    if (ldelta >= ld.front()) return full;
    if (ldelta <= ld.back()) return std::exp(lw.back() + tail_exp * (ldelta - ld.back()));
    const double pos = (ld.front() - ldelta) / std::numbers::ln2;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return std::exp(lw[i] + frac * (lw[i + 1] - lw[i]));
  };
  return zygmund_bochkarev_series(omega, k_max);
}

ConditionVerdict corollary2_criterion(const profiles::RadialProfile& profile, int n) {
  const auto end = profile.support_end();
  if (!end || *end != 1.0) return verdict(ConditionId::c20, Status::undetermined, kInf);
  const double power = -0.5 * (n + 1);
  const double head = quad::integrate_adaptive([&](double t) { return profile.eval(t) * std::pow(1.0 - t, power); },
                                               0.0, 0.5, block_spec())
                          .value;
  const auto masses = dyadic_masses([&](double u) { return std::abs(profile.eval_reflected(u)) * std::pow(u, power); }, 50);
  return from_blocks(ConditionId::c20, head, masses);
}

double sphere_area(int n) { return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n); }

std::vector<double> radial_l1(const profiles::RadialProfile& profile, int n, const std::vector<double>& N_grid,
                              double dr, bool force) {
  if (N_grid.empty()) throw DomainError("radial_l1: empty N grid");
  const double N_max = *std::max_element(N_grid.begin(), N_grid.end());
  if (!(N_max > 1.0)) throw DomainError("radial_l1: N values must exceed 1");
  const auto count = static_cast<std::size_t>(std::ceil((N_max - 1.0) / dr)) + 1;
  const double step = (N_max - 1.0) / static_cast<double>(count - 1);
  std::vector<double> radii(count);
  for (std::size_t i = 0; i < count; ++i) radii[i] = 1.0 + step * static_cast<double>(i);
  transform::TransformRequest req{profile, n, 0.5 * (n - 1), transform::Method::eq6, force};
  const auto fh = transform::forward_eq6_grid(req, radii);
  std::vector<double> y(count);
  for (std::size_t i = 0; i < count; ++i) y[i] = std::pow(radii[i], n - 1) * std::abs(fh[i].value);
  const auto c = cumulative_trapezoid(y, step);
  std::vector<double> out;
  const double area = sphere_area(n);
  for (double N : N_grid) out.push_back(area * trapezoid_cumulative_at(c, 1.0, step, N));
  return out;
}

L1ComparisonReport theorem2_compare(const profiles::RadialProfile& profile, int n, std::vector<double> N_grid) {
  if (N_grid.empty()) throw DomainError("theorem2_compare: empty N grid");
  std::sort(N_grid.begin(), N_grid.end());
  L1ComparisonReport rep;
  rep.N_grid = N_grid;
  rep.constant_printed = std::pow(2.0, 0.5 * (n + 3)) * std::pow(kPi, n) / std::tgamma(0.5 * n);
  rep.constant_derived = rep.constant_printed / std::sqrt(kPi);

  const auto F = fraccalc::build_F(profile, fraccalc::FractionalOrder::of(0.5 * (n - 1)), n);
  const auto [lo, hi] = sample_range(profile);
  const auto c14 = check_condition14(F.F);
  rep.diverging = c14.status == Status::fail;
  const double V = fraccalc::total_variation(F.F, {lo, hi}).total_variation;
  rep.residual_bound = V + c14.evidence.value;

  constexpr double kStep = 0.25;
  rep.lhs = radial_l1(profile, n, N_grid, kStep, true);

  const double N_max = N_grid.back();
  const auto count = static_cast<std::size_t>(std::ceil((N_max - 1.0) / kStep)) + 1;
  const double step = (N_max - 1.0) / static_cast<double>(count - 1);
  std::vector<double> graded;
  if (auto k = profile.evaluable().kink) graded.push_back(*k);
  auto inner = transform::sine_transform_uniform(F.F, lo, hi, graded, -0.5 * kPi * n, 1.0, step, static_cast<int>(count));
  for (double& x : inner) x = std::abs(x);
  const auto c = cumulative_trapezoid(inner, step);
  for (double N : N_grid) rep.rhs.push_back(trapezoid_cumulative_at(c, 1.0, step, N));

  for (std::size_t i = 0; i < N_grid.size(); ++i) {
    rep.residual.push_back(rep.lhs[i] - rep.constant_derived * rep.rhs[i]);
    rep.residual_printed.push_back(rep.lhs[i] - rep.constant_printed * rep.rhs[i]);
    if (std::isfinite(rep.residual_bound) && rep.residual_bound > 0.0)
      rep.normalized_residual = std::max(rep.normalized_residual, std::abs(rep.residual.back()) / rep.residual_bound);
  }
  if (!std::isfinite(rep.residual_bound)) rep.normalized_residual = kInf;
  if (N_grid.size() >= 2) {
    rep.lhs_growth = growth_vs_log(N_grid, rep.lhs);
    std::vector<double> scaled;
    for (double r : rep.rhs) scaled.push_back(rep.constant_derived * r);
    rep.rhs_growth = growth_vs_log(N_grid, scaled);
  }
  return rep;
}

}  // namespace radialft::diagnostics
