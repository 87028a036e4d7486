#include "radialft/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "radialft/error.hpp"
#include "radialft/quad.hpp"
#include "radialft/specfun.hpp"

namespace radialft::transform {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGradingLevels = 50;

using profiles::RadialProfile;

double sign_of_power(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

quad::QuadratureSpec tight() {
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-300;
  spec.strict = false;
  return spec;
}

// Integrates g over [a, b] in pieces no longer than `width`.
quad::QuadResult integrate_pieces(const std::function<double(double)>& g, double a, double b, double width,
                                  const quad::QuadratureSpec& spec, const quad::EndpointHints& last_hints = {}) {
  quad::QuadResult total;
  total.evaluations = 0;
  if (!(b > a)) return total;
  const int m = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-9)));
  for (int k = 0; k < m; ++k) {
    const double x0 = a + (b - a) * k / m;
    const double x1 = k + 1 == m ? b : a + (b - a) * (k + 1) / m;
    auto piece = quad::integrate_adaptive(g, x0, x1, spec, k + 1 == m ? last_hints : quad::EndpointHints{});
    total.value += piece.value;
    total.err_est += piece.err_est;
    total.evaluations += piece.evaluations;
    total.converged = total.converged && piece.converged;
  }
  return total;
}

void check_hypotheses(const TransformRequest& req) {
  if (req.force) return;
  const auto order = fraccalc::FractionalOrder::of(req.alpha);
  if (req.profile.locally_absolutely_continuous(order.alpha_star) == std::optional<bool>(false))
    throw ConditionViolation("profile derivatives up to order " + std::to_string(order.alpha_star) +
                             " are not locally absolutely continuous; use force to evaluate anyway");
}

// Shared mesh for the fractional representation: F sampled once, reused for
// every radius.
class Eq6Plan {
 public:
  Eq6Plan(const TransformRequest& req, double r_max)
      : n_(req.n), alpha_(req.alpha), profile_(req.profile) {
    req.validate();
    check_hypotheses(req);
    const auto order = fraccalc::FractionalOrder::of(alpha_);
    F_ = fraccalc::build_F(profile_, order, n_);
    kernel_ = &specfun::KernelTable::get({alpha_, n_}, specfun::KernelTable::Kind::Q);
    scale_ = std::pow(2.0 * kPi, 0.5 * n_) * sign_of_power(order.alpha_star + 1) / std::tgamma(alpha_);

    std::vector<double> graded{0.0};
    const Evaluable ev = profile_.evaluable();
    if (ev.kink) graded.push_back(*ev.kink);
    if (profile_.support_end()) {
      end_ = *profile_.support_end();
      graded.push_back(end_);
    } else if (profile_.tail_power()) {
      end_ = std::max(4.0, 4.0 * ev.kink.value_or(1.0));
      tail_power_ = profile_.tail_power();
    } else {
      end_ = 1.25 * profile_.decay_scale();
    }
    const double width = std::min(end_ / 8.0, 6.0 / std::max(r_max, 1e-3));
    const auto hi = quad::composite_rule(0.0, end_, width, graded, 20, kGradingLevels);
    const auto lo = quad::composite_rule(0.0, end_, width, graded, 12, kGradingLevels);
    sample(hi, hi_);
    sample(lo, lo_);
  }

  TransformResult at(double r) const {
    if (!(r > 0.0)) throw DomainError("transform: r must be positive (r = 0 is excluded)");
    double s_hi = 0.0, s_lo = 0.0, s_abs = 0.0;
    for (std::size_t i = 0; i < hi_.t.size(); ++i) {
      const double term = hi_.g[i] * (*kernel_)(r * hi_.t[i]);
      s_hi += term;
      s_abs += std::abs(term);
    }
    for (std::size_t i = 0; i < lo_.t.size(); ++i) s_lo += lo_.g[i] * (*kernel_)(r * lo_.t[i]);
    double err = std::abs(s_hi - s_lo) + 1e-15 * s_abs;
    double limit = end_;
    if (tail_power_) {
      const auto tail = tail_integral(r);
      s_hi += tail.value;
      err += tail.err_est;
      limit = tail.limit;
    }
    const double pre = scale_ * std::pow(r, 1.0 - 0.5 * n_);
    TransformResult out;
    out.r = r;
    out.value = pre * s_hi;
    out.err_est = std::abs(pre) * err;
    out.method = Method::eq6;
    out.truncation_A = limit;
    return out;
  }

 private:
  struct Samples {
    std::vector<double> t;
    std::vector<double> g;  // weight * F(t) t^(alpha+1/2)
  };
  struct Tail {
    double value = 0.0;
    double err_est = 0.0;
    double limit = 0.0;
  };

  double weighted_F(double t) const { return F_(t) * std::pow(t, alpha_ + 0.5); }

  void sample(const quad::CompositeRule& rule, Samples& s) const {
    s.t = rule.nodes;
    s.g.assign(rule.nodes.size(), 0.0);
    const auto count = static_cast<std::ptrdiff_t>(rule.nodes.size());
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto k = static_cast<std::size_t>(i);
      s.g[k] = rule.weights[k] * weighted_F(rule.nodes[k]);
    }
  }

  // Beyond the mesh: direct kernel up to the expansion crossover, then the
  // non-oscillating part of the expansion on a mapped interval and the
  // oscillating part by accelerated half-period panels.
  Tail tail_integral(double r) const {
    Tail out;
    const auto spec = tight();
    const double start = std::max(end_, kernel_->crossover() / r);
    const double half = kPi / r;
    if (start > end_) {
      auto mid = integrate_pieces([&](double t) { return weighted_F(t) * (*kernel_)(r * t); }, end_, start,
                                  std::min(half, start - end_), spec);
      out.value += mid.value;
      out.err_est += mid.err_est;
    }
    quad::EndpointHints hints;
    if (*tail_power_ - 1.0 < 0.0) hints.left = *tail_power_ - 1.0;
    auto alg = quad::integrate_adaptive(
        [&](double v) {
          if (v <= 0.0) return 0.0;
          const double t = start / v;
          return weighted_F(t) * kernel_->algebraic_part(r * t) * start / (v * v);
        },
        0.0, 1.0, spec, hints);
    out.value += alg.value;
    out.err_est += alg.err_est;
    quad::QuadratureSpec ospec;
    ospec.rel_tol = 1e-10;
    ospec.abs_tol = 1e-15;
    ospec.strict = false;
    auto osc = quad::integrate_panels_accelerated(
        [&](double t) { return weighted_F(t) * kernel_->oscillatory_part(r * t); },
        [&](int k) { return start + k * half; }, ospec);
    if (osc.diverged) throw DivergenceError("transform: oscillatory tail integral diverges");
    out.value += osc.value;
    out.err_est += osc.err_est;
    out.limit = start + osc.panels * half;
    return out;
  }

  int n_;
  double alpha_;
  RadialProfile profile_;
  fraccalc::FractionalDerivativeResult F_;
  const specfun::KernelTable* kernel_ = nullptr;
  double scale_ = 0.0;
  double end_ = 0.0;
  std::optional<double> tail_power_;
  Samples hi_, lo_;
};

double max_radius(const std::vector<double>& radii) {
  if (radii.empty()) throw DomainError("transform: empty radius grid");
  double m = 0.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw DomainError("transform: radii must be positive");
    m = std::max(m, r);
  }
  return m;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::eq6: return "eq6";
    case Method::direct: return "direct";
    case Method::asymptotic: return "asymptotic";
    case Method::automatic: return "auto";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "eq6") return Method::eq6;
  if (name == "direct") return Method::direct;
  if (name == "asymptotic") return Method::asymptotic;
  if (name == "auto") return Method::automatic;
  throw ParseError("unknown method '" + name + "' (expected eq6|direct|asymptotic|auto)");
}

void TransformRequest::validate() const { specfun::KernelParams{alpha, n}.validate(); }

TransformResult forward_eq6(const TransformRequest& req, double r) { return Eq6Plan(req, r).at(r); }

std::vector<TransformResult> forward_eq6_grid(const TransformRequest& req, const std::vector<double>& radii) {
  const Eq6Plan plan(req, max_radius(radii));
  std::vector<TransformResult> out(radii.size());
  const auto count = static_cast<std::ptrdiff_t>(radii.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = plan.at(radii[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(radialft_transform_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<TransformResult> forward_eq6_grid_serial(const TransformRequest& req, const std::vector<double>& radii) {
  const Eq6Plan plan(req, max_radius(radii));
  std::vector<TransformResult> out;
  out.reserve(radii.size());
  for (double r : radii) out.push_back(plan.at(r));
  return out;
}

TransformResult forward_direct(const RadialProfile& profile, int n, double r, const std::vector<double>& A_schedule) {
  if (n < 2) throw DomainError("transform: dimension must be >= 2");
  if (!(r > 0.0)) throw DomainError("transform: r must be positive (r = 0 is excluded)");
  const double nu = 0.5 * n - 1.0;
  auto g = [&](double t) { return t == 0.0 ? 0.0 : profile.eval(t) * std::pow(t, 0.5 * n) * specfun::bessel_j(nu, r * t); };
  const auto spec = tight();
  const double width = std::min(1.0, kPi / r);
  const Evaluable ev = profile.evaluable();

  auto truncated = [&](double A) {
    quad::QuadResult total;
    double a = 0.0;
    std::vector<double> cuts;
    if (ev.kink && *ev.kink < A) cuts.push_back(*ev.kink);
    cuts.push_back(A);
    for (double c : cuts) {
      auto part = integrate_pieces(g, a, c, width, spec);
      total.value += part.value;
      total.err_est += part.err_est;
      a = c;
    }
    return total;
  };

  const double pre = std::pow(2.0 * kPi, 0.5 * n) * std::pow(r, -nu);
  TransformResult out;
  out.r = r;
  out.method = Method::direct;
  out.sign_convention_id = "none";

  const auto end = profile.support_end();
  if (!A_schedule.empty() && !end) {
    std::vector<std::pair<double, double>> samples;
    for (double A : A_schedule) {
      // Average over half a Bessel period to damp the oscillation in A.
      const double v = 0.5 * (truncated(A).value + truncated(A + kPi / r).value);
      samples.emplace_back(A, v);
    }
    auto lim = quad::limit_extrapolate(samples);
    if (lim.diverged) throw DivergenceError("direct transform: truncated integrals do not settle as A grows");
    out.value = pre * lim.limit;
    out.err_est = std::abs(pre) * lim.err_est;
    out.truncation_A = std::numeric_limits<double>::infinity();
    return out;
  }

  if (end) {
    auto res = truncated(*end);
    out.value = pre * res.value;
    out.err_est = std::abs(pre) * res.err_est;
    out.truncation_A = *end;
    return out;
  }
  if (!profile.tail_power()) {
    const double T = 1.25 * profile.decay_scale();
    auto res = truncated(T);
    out.value = pre * res.value;
    out.err_est = std::abs(pre) * res.err_est;
    out.truncation_A = T;
    return out;
  }
  const double T = std::max(4.0, 4.0 * ev.kink.value_or(1.0));
  auto head = truncated(T);
  quad::QuadratureSpec ospec;
  ospec.rel_tol = 1e-10;
  ospec.abs_tol = 1e-15;
  ospec.strict = false;
  auto tail = quad::integrate_oscillatory([&](double t) { return profile.eval(t) * std::pow(t, 0.5 * n); },
                                          quad::OscillatorySplit::bessel(nu, r), T, ospec);
  if (tail.diverged) throw DivergenceError("direct transform: oscillatory tail integral diverges");
  out.value = pre * (head.value + tail.value);
  out.err_est = std::abs(pre) * (head.err_est + tail.err_est);
  out.truncation_A = T + tail.panels * kPi / r;
  return out;
}

std::vector<TransformResult> forward_direct_grid(const RadialProfile& profile, int n, const std::vector<double>& radii,
                                                 const std::vector<double>& A_schedule) {
  max_radius(radii);
  std::vector<TransformResult> out(radii.size());
  const auto count = static_cast<std::ptrdiff_t>(radii.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = forward_direct(profile, n, radii[static_cast<std::size_t>(i)], A_schedule);
    } catch (...) {
#pragma omp critical(radialft_transform_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<TransformResult> transform_grid(const TransformRequest& req, const std::vector<double>& radii) {
  switch (req.method) {
    case Method::eq6: return forward_eq6_grid(req, radii);
    case Method::direct: {
      req.validate();
      return forward_direct_grid(req.profile, req.n, radii);
    }
    case Method::asymptotic: {
      max_radius(radii);
      const Theorem3Model model(req.profile, req.n);
      std::vector<TransformResult> out;
      for (double r : radii) {
        if (r < 2.0) throw DomainError("asymptotic method needs r >= 2");
        TransformResult tr;
        tr.r = r;
        tr.value = model.main_term(r);
        tr.err_est = model.envelope(r);
        tr.method = Method::asymptotic;
        tr.truncation_A = 1.0;
        tr.sign_convention_id = "leading-constant-sign-floor-n-half";
        out.push_back(tr);
      }
      return out;
    }
    case Method::automatic: {
      auto out = forward_eq6_grid(req, radii);
      std::vector<std::size_t> picks{0, radii.size() / 2, radii.size() - 1};
      picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
      for (std::size_t i : picks) {
        const auto d = forward_direct(req.profile, req.n, radii[i]);
        out[i].cross_check = std::abs(d.value - out[i].value);
      }
      for (auto& tr : out) tr.method = Method::automatic;
      return out;
    }
  }
  return {};
}

InverseResult inverse_eq5(const std::function<double(double)>& fhat, int n, double alpha, double r,
                          const std::vector<double>& A_schedule) {
  specfun::KernelParams{alpha, n}.validate();
  if (!(r > 0.0)) throw DomainError("inverse: r must be positive");
  if (A_schedule.empty()) throw DomainError("inverse: empty A schedule");
  const double lambda = 0.5 * (n - 1) - alpha;
  const double nu = 0.5 * n - 1.0;
  const double pre = std::pow(2.0 * kPi, -0.5 * n) * std::pow(r, -nu);
  const auto spec = tight();
  InverseResult out;
  for (double A : A_schedule) {
    if (!(A > 0.0)) throw DomainError("inverse: A values must be positive");
    auto g = [&](double s) {
      if (s <= 0.0) return 0.0;
      const double x = s / A;
      const double weight = lambda == 0.0 ? 1.0 : std::pow((1.0 - x) * (1.0 + x), lambda);
      return weight * fhat(s) * std::pow(s, 0.5 * n) * specfun::bessel_j(nu, r * s);
    };
    auto res = integrate_pieces(g, 0.0, A, std::min(1.0, kPi / r), spec);
    out.means.emplace_back(A, pre * res.value);
  }
  if (out.means.size() >= 4) {
    auto lim = quad::limit_extrapolate(out.means);
    out.value = lim.limit;
    out.err_est = lim.err_est;
    out.diverged = lim.diverged;
  } else {
    out.value = out.means.back().second;
    out.err_est = out.means.size() > 1 ? std::abs(out.means.back().second - out.means[out.means.size() - 2].second)
                                       : std::numeric_limits<double>::infinity();
  }
  return out;
}

std::function<double(double)> tabulate_transform(const TransformRequest& req, double s_max) {
  if (!(s_max > 0.0)) throw DomainError("tabulate_transform: s_max must be positive");
  auto plan = std::make_shared<const Eq6Plan>(req, s_max);
  const int panels = std::max(1, static_cast<int>(std::ceil(s_max / 4.0)));
  auto table = std::make_shared<const quad::ChebyshevTable>([plan](double s) { return plan->at(s).value; }, 0.0,
                                                            s_max, panels, 24);
  return [table, s_max](double s) { return s > s_max ? 0.0 : (*table)(s); };
}

double LeadingConstant::value() const {
  return std::pow(2.0, exponent_base2) * std::pow(kPi, exponent_pi) * sign_of_power(sign);
}

LeadingConstant theorem3_constant(int n, std::optional<double> exponent_base2) {
  LeadingConstant c;
  c.exponent_base2 = exponent_base2.value_or(0.5 * (n + 1));
  c.exponent_pi = 0.5 * (n - 1);
  c.sign = n / 2;
  return c;
}

Theorem3Model::Theorem3Model(const RadialProfile& profile, int n, std::optional<double> exponent_base2)
    : n_(n), constant_(theorem3_constant(n, exponent_base2)) {
  if (n < 2) throw DomainError("asymptotics: dimension must be >= 2");
  const auto end = profile.support_end();
  if (!end || *end != 1.0) throw ConditionViolation("asymptotics need a profile supported on [0, 1]");
  F_ = fraccalc::build_F(profile, fraccalc::FractionalOrder::of(0.5 * (n - 1)), n);

  constexpr int kProbe = 400;
  std::vector<double> probe(kProbe + 1);
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i <= kProbe; ++i) probe[static_cast<std::size_t>(i)] = F_(static_cast<double>(i) / kProbe);
  double scale = 0.0;
  for (double v : probe) scale = std::max(scale, std::abs(v));
  for (int i = 1; i < kProbe; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (probe[k - 1] - 2.0 * probe[k] + probe[k + 1] < -1e-9 * std::max(scale, 1e-300))
      throw ConditionViolation("F is not convex on [0, 1]");
  }

  const auto rule = quad::composite_rule(0.0, 1.0, 1.0 / 32.0, {0.0, 1.0}, 8, 40);
  t_ = rule.nodes;
  w_ = rule.weights;
  std::vector<double> values(t_.size());
  const auto count = static_cast<std::ptrdiff_t>(t_.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) values[static_cast<std::size_t>(i)] = F_(t_[static_cast<std::size_t>(i)]);
  slope_.assign(t_.size(), 0.0);
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == t_.size() ? i : i + 1;
    if (b > a) slope_[i] = std::abs((values[b] - values[a]) / (t_[b] - t_[a]));
  }
  const auto half = std::lower_bound(t_.begin(), t_.end(), 0.5) - t_.begin();
  slope_half_ = slope_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(half, count - 1))];
  variation_ = fraccalc::total_variation(F_.F, {0.0, 1.0}).total_variation;
}

double Theorem3Model::shape(double r) const {
  return std::pow(r, -n_) * F_(1.0 - 1.0 / r) * std::cos(r - 0.5 * kPi * n_);
}

double Theorem3Model::main_term(double r) const { return constant_.value() * shape(r); }

double Theorem3Model::envelope(double r) const {
  if (r < 2.0) throw DomainError("asymptotics: r must be >= 2");
  double near_end = 0.0, near_origin = 0.0, middle = 0.0, inner = 0.0;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    const double t = t_[i];
    const double s = w_[i] * slope_[i];
    if (t >= 1.0 - 2.0 / r) near_end += s * (1.0 - t);
    if (t <= 2.0 / r) near_origin += s * t;
    if (t >= 1.0 / r && t <= 1.0 - 1.0 / r) middle += s / t;
    if (t >= 1.0 / r && t <= 0.5) inner += s / std::sqrt(t);
  }
  return std::pow(r, 1.0 - n_) * (near_end + near_origin) +
         std::pow(r, -n_ - 1.0) * (middle + std::abs(F_(1.0 - 1.0 / r))) +
         std::pow(r, -n_ - 0.5) * (inner + slope_half_);
}

AsymptoticResult theorem3_asymptotic(const RadialProfile& profile, int n, double r) {
  if (r < 2.0) throw DomainError("asymptotics: r must be >= 2");
  auto model = std::make_shared<const Theorem3Model>(profile, n);
  AsymptoticResult out;
  out.main_term = model->main_term(r);
  out.remainder_envelope = [model](double s) { return model->envelope(s); };
  std::vector<double> radii;
  for (int i = 0; i < 48; ++i) radii.push_back(2.0 * std::pow(32.0, i / 47.0));
  const auto fh = forward_eq6_grid({profile, n, 0.5 * (n - 1), Method::eq6, true}, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double env = model->envelope(radii[i]);
    if (env > 0.0) out.theta_bound = std::max(out.theta_bound, std::abs(fh[i].value - model->main_term(radii[i])) / env);
  }
  return out;
}

Theorem3Calibration calibrate_theorem3(const RadialProfile& profile, int n, double r_lo, double r_hi, int max_peaks) {
  if (!(r_hi > r_lo) || r_lo < 2.0) throw DomainError("calibrate_theorem3: need 2 <= r_lo < r_hi");
  const Theorem3Model unit(profile, n, 0.0);
  Theorem3Calibration out;
  const double phase = 0.5 * kPi * n;
  const auto k0 = static_cast<long>(std::ceil((r_lo - phase) / kPi));
  const auto k1 = static_cast<long>(std::floor((r_hi - phase) / kPi));
  if (k1 < k0) throw DomainError("calibrate_theorem3: no cosine peak in range");
  const long total = k1 - k0 + 1;
  const long picks = std::min<long>(total, max_peaks);
  for (long j = 0; j < picks; ++j) {
    const long k = picks == 1 ? k0 : k0 + static_cast<long>(std::llround(
                                               std::expm1(std::log1p(static_cast<double>(total - 1)) * j / (picks - 1))));
    const double r = phase + k * kPi;
    if (out.peaks.empty() || r > out.peaks.back()) out.peaks.push_back(r);
  }
  const auto fh = forward_eq6_grid({profile, n, 0.5 * (n - 1), Method::eq6, true}, out.peaks);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < out.peaks.size(); ++i) {
    const double m = unit.main_term(out.peaks[i]);
    out.fhat.push_back(fh[i].value);
    num += fh[i].value * m;
    den += m * m;
  }
  const double c = num / den;
  out.fitted_exponent = c > 0.0 ? std::log2(c) : std::numeric_limits<double>::quiet_NaN();
  auto rms = [&](double e) {
    double s = 0.0;
    for (std::size_t i = 0; i < out.peaks.size(); ++i) {
      const double m = std::pow(2.0, e) * unit.main_term(out.peaks[i]);
      const double d = (out.fhat[i] - m) / out.fhat[i];
      s += d * d;
    }
    return std::sqrt(s / out.peaks.size());
  };
  out.residual_half = rms(0.5 * (n + 1));
  out.residual_third = rms((n + 1) / 3.0);
  const LeadingConstant derived = theorem3_constant(n);
  for (double r : out.peaks) out.main_term.push_back(std::pow(2.0, derived.exponent_base2) * unit.main_term(r));
  return out;
}

A2Result theoremA2_1d(const Evaluable& f, double a, double b, double r) {
  if (!(std::abs(r) >= 2.0)) throw DomainError("theoremA2_1d: need |r| >= 2");
  if (!(b > a) || !std::isfinite(b) || !std::isfinite(a)) throw DomainError("theoremA2_1d: need finite a < b");
  constexpr int kProbe = 400;
  std::vector<double> v(kProbe + 1);
  for (int i = 0; i <= kProbe; ++i) {
    // Keep the probe strictly inside so a support end at b is not sampled.
    const double t = i == kProbe ? std::nextafter(b, a) : a + (b - a) * i / kProbe;
    v[static_cast<std::size_t>(i)] = f(t);
  }
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  for (int i = 1; i < kProbe; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (v[k - 1] - 2.0 * v[k] + v[k + 1] < -1e-9 * std::max(scale, 1e-300))
      throw ConditionViolation("f is not convex on [a, b]");
  }
  const double fb = v.back();
  const double d = std::min(b - a, kPi);
  const std::complex<double> I(0.0, 1.0);
  A2Result out;
  out.main_term = (I / r) * (fb * std::exp(-I * (b * r)) - f(a + d / std::abs(r)) * std::exp(-I * (a * r)));
  const auto spec = tight();
  const double width = std::min(b - a, kPi / std::abs(r));
  const double re = integrate_pieces([&](double t) { return f(t) * std::cos(r * t); }, a, b, width, spec).value;
  const double im = integrate_pieces([&](double t) { return -f(t) * std::sin(r * t); }, a, b, width, spec).value;
  out.exact = {re, im};
  out.remainder = std::abs(out.exact - out.main_term);
  double fprime_b = 0.0;
  if (f.derivative && f.max_derivative >= 1) {
    fprime_b = f.derivative(1, std::nextafter(b, a));
  } else {
    const double h = 1e-6 * (b - a);
    fprime_b = (fb - f(b - h)) / h;
  }
  const double var = fraccalc::total_variation([&](double t) { return t >= b ? fb : f(t); }, {a, b}).total_variation;
  out.budget = var / d + std::abs(fprime_b);
  return out;
}

DecayReport decay_check(const std::vector<TransformResult>& results, int n) {
  DecayReport out;
  if (results.empty()) return out;
  std::vector<double> scaled;
  for (const auto& tr : results) scaled.push_back(std::pow(tr.r, 0.5 * n) * std::abs(tr.value));
  out.sup_scaled = *std::max_element(scaled.begin(), scaled.end());
  const std::size_t cut = (2 * scaled.size()) / 3;
  double early = 0.0, late = 0.0;
  for (std::size_t i = 0; i < scaled.size(); ++i) (i < cut ? early : late) = std::max(i < cut ? early : late, scaled[i]);
  out.bounded = cut == 0 || late <= 1.5 * early;

  // Per-octave maxima of |fhat| and their log-log regression slope.
  std::vector<std::pair<double, double>> octaves;
  for (const auto& tr : results) {
    if (tr.value == 0.0) continue;
    const double key = std::floor(std::log2(tr.r));
    if (octaves.empty() || std::floor(std::log2(octaves.back().first)) != key) {
      octaves.emplace_back(tr.r, std::abs(tr.value));
    } else if (std::abs(tr.value) > octaves.back().second) {
      octaves.back() = {tr.r, std::abs(tr.value)};
    }
  }
  if (octaves.size() >= 2) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [r, v] : octaves) {
      const double x = std::log(r), y = std::log(v);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(octaves.size());
    out.envelope_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return out;
}

std::vector<double> sine_transform_uniform(const std::function<double(double)>& f, double a, double b,
                                           const std::vector<double>& graded, double phase, double r0, double dr,
                                           int count) {
  if (count <= 0) return {};
  if (!(b > a)) throw DomainError("sine_transform_uniform: empty interval");
  const double r_max = std::max(std::abs(r0), std::abs(r0 + dr * (count - 1)));
  std::vector<double> points = graded;
  points.push_back(a);
  points.push_back(b);
  const auto rule = quad::composite_rule(a, b, std::min((b - a) / 8.0, 3.0 / std::max(r_max, 1.0)), points, 20, 50);
  const std::size_t m = rule.nodes.size();
  std::vector<double> fw(m), cd(m), sd(m);
  const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < mm; ++i) {
    const auto k = static_cast<std::size_t>(i);
    fw[k] = rule.weights[k] * f(rule.nodes[k]);
    cd[k] = std::cos(dr * rule.nodes[k]);
    sd[k] = std::sin(dr * rule.nodes[k]);
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  constexpr int kBlock = 256;
  const int blocks = (count + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(dynamic, 1)
  for (int blk = 0; blk < blocks; ++blk) {
    const int k0 = blk * kBlock;
    const int k1 = std::min(count, k0 + kBlock);
    std::vector<double> s(m), c(m);
    const double r = r0 + dr * k0;
    for (std::size_t i = 0; i < m; ++i) {
      s[i] = std::sin(r * rule.nodes[i] + phase);
      c[i] = std::cos(r * rule.nodes[i] + phase);
    }
    for (int k = k0; k < k1; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        acc += fw[i] * s[i];
        const double sn = s[i] * cd[i] + c[i] * sd[i];
        c[i] = c[i] * cd[i] - s[i] * sd[i];
        s[i] = sn;
      }
      out[static_cast<std::size_t>(k)] = acc;
    }
  }
  return out;
}

}  // namespace radialft::transform
