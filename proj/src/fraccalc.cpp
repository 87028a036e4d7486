#include "radialft/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radialft/error.hpp"
#include "radialft/quad.hpp"

namespace radialft::fraccalc {

FractionalOrder FractionalOrder::of(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("fractional order must be a positive number");
  FractionalOrder o;
  o.alpha = alpha;
  o.floor_alpha = static_cast<int>(std::floor(alpha));
  o.alpha_star = o.floor_alpha == alpha ? o.floor_alpha - 1 : o.floor_alpha;
  return o;
}

std::string provenance_name(Provenance p) { return p == Provenance::closed_form ? "closed-form" : "weyl-numeric"; }

namespace {

quad::QuadratureSpec loose(double rel_tol) {
  quad::QuadratureSpec spec;
  spec.rel_tol = rel_tol;
  spec.abs_tol = 1e-300;
  spec.strict = false;
  return spec;
}

DerivativeValue derivative_of(const Evaluable& f, int k, double t) {
  if (k == 0) return {f(t), 0.0, true, false};
  if (f.derivative && k <= f.max_derivative) return {f.derivative(k, t), 0.0, true, false};
  const int base = f.derivative ? std::min(f.max_derivative, k - 1) : 0;
  std::function<double(double)> g = f.f;
  if (base > 0) g = [&f, base](double s) { return f.derivative(base, s); };
  const auto [lo, hi] = stencil_bounds(f, t);
  const double h0 = 0.05 * std::clamp(t, 1e-6, 1.0);
  return numeric_derivative(g, k - base, t, h0, lo, hi);
}

// ∫_0^∞ g(u) u^power du for g decaying beyond `scale`; `tail_exponent` is the
// behaviour of the mapped tail integrand near v = 0 when known.
quad::QuadResult half_line(const std::function<double(double)>& g, double power, double scale,
                           std::optional<double> tail_exponent, double rel_tol) {
  const auto spec = loose(rel_tol);
  quad::EndpointHints head_hints;
  if (power < 0.0) head_hints.left = power;
  auto head = quad::integrate_adaptive([&](double u) { return u == 0.0 ? 0.0 : g(u) * std::pow(u, power); }, 0.0,
                                       scale, spec, head_hints);
  quad::EndpointHints tail_hints;
  if (tail_exponent && *tail_exponent < 0.0) tail_hints.left = *tail_exponent;
  auto tail = quad::integrate_adaptive(
      [&](double v) {
        if (v <= 0.0) return 0.0;
        const double u = scale / v;
        const double gv = g(u);
        if (gv == 0.0) return 0.0;
        return gv * std::pow(u, power) * scale / (v * v);
      },
      0.0, 1.0, spec, tail_hints);
  quad::QuadResult out;
  out.value = head.value + tail.value;
  out.err_est = head.err_est + tail.err_est;
  out.evaluations = head.evaluations + tail.evaluations;
  out.converged = head.converged && tail.converged;
  return out;
}

void check_tail(const Evaluable& f, double alpha, double t) {
  // Compared in logs: far out in a variable map r^alpha overflows while f(r) is tiny.
  const double u0 = std::max(f.scale, 1.0);
  const double none = -std::numeric_limits<double>::infinity();
  double first = none, last = none;
  for (int j = 1; j <= 4; ++j) {
    const double r = t + std::max(u0, t) * std::pow(10.0, j);
    const double v = std::abs(f(r));
    const double m = v > 0.0 ? std::log(v) + alpha * std::log(r) : none;
    if (j == 1) first = m;
    last = m;
  }
  if (last > std::log(1e-300) && last >= first - std::log(2.0))
    throw DivergenceError("Weyl integral: |f(r)| r^alpha does not decay; the integral diverges");
}

}  // namespace

double weyl_integral(const Evaluable& f, double alpha, double t, double rel_tol) {
  if (!(alpha > 0.0)) throw DomainError("weyl_integral: alpha must be > 0");
  if (!(t >= 0.0)) throw DomainError("weyl_integral: t must be >= 0");
  const double norm = 1.0 / std::tgamma(alpha);
  if (f.support_end) {
    const double end = *f.support_end;
    if (t >= end) return 0.0;
    quad::EndpointHints hints;
    if (alpha < 1.0) hints.left = alpha - 1.0;
    if (f.end_exponent < 0.0) hints.right = f.end_exponent;
    auto g = [&](double u) { return u == 0.0 && alpha < 1.0 ? 0.0 : f(t + u) * std::pow(u, alpha - 1.0); };
    return norm * quad::integrate_adaptive(g, 0.0, end - t, loose(rel_tol), hints).value;
  }
  check_tail(f, alpha, t);
  std::optional<double> tail_exp;
  if (f.tail_power) tail_exp = *f.tail_power - alpha - 1.0;
  return norm * half_line([&](double u) { return f(t + u); }, alpha - 1.0, std::max(f.scale, 1.0), tail_exp, rel_tol)
                    .value;
}

DerivativeValue weyl_derivative_detail(const Evaluable& f, const FractionalOrder& order, double t) {
  if (!(t > 0.0)) throw DomainError("weyl_derivative: t must be > 0");
  if (order.is_integer()) return derivative_of(f, order.floor_alpha, t);
  const int p = order.floor_alpha;
  const double gamma = order.frac();
  const double norm = 1.0 / std::tgamma(1.0 - gamma);

  DerivativeValue out;
  out.closed_form = f.derivative && p + 1 <= f.max_derivative;
  bool noisy = false;
  auto h = [&](double s) {
    DerivativeValue d = derivative_of(f, p + 1, s);
    noisy = noisy || d.precision_warning;
    return d.value;
  };

  if (f.support_end) {
    const double end = *f.support_end;
    if (t >= end) return {0.0, 0.0, out.closed_form, false};
    const bool jump = f.end_exponent <= 0.0;
    if (f.end_exponent > p || (jump && p == 0)) {
      quad::EndpointHints hints;
      hints.left = -gamma;
      if (!jump && f.end_exponent - p - 1.0 < 0.0) hints.right = f.end_exponent - p - 1.0;
      auto g = [&](double u) { return u == 0.0 ? 0.0 : h(t + u) * std::pow(u, -gamma); };
      // Near the end the integrand is only known to about eps * end / (end - t).
      auto spec = loose(std::max(1e-11, 8.0 * std::numeric_limits<double>::epsilon() * end / (end - t)));
      spec.abs_tol = 1e-16;
      auto res = quad::integrate_adaptive(g, 0.0, end - t, spec, hints);
      double value = res.value;
      if (jump) value -= f(std::nextafter(end, 0.0)) * std::pow(end - t, -gamma);
      out.value = norm * value;
      out.err_est = norm * res.err_est;
      out.precision_warning = noisy;
      return out;
    }
    // Not smooth enough at the support end to push p + 1 derivatives inside
    // the integral: differentiate the gamma-level function instead.
    const FractionalOrder base = FractionalOrder::of(gamma);
    auto phi = [&](double s) { return weyl_derivative_detail(f, base, s).value; };
    const double h0 = 0.05 * std::min(t, end - t);
    DerivativeValue d = numeric_derivative(phi, p, t, h0, 0.0, end);
    d.closed_form = false;
    return d;
  }

  std::optional<double> tail_exp;
  if (f.tail_power) tail_exp = *f.tail_power + p + gamma - 1.0;
  auto res = half_line([&](double u) { return h(t + u); }, -gamma, std::max(f.scale, 1.0), tail_exp, 1e-11);
  out.value = norm * res.value;
  out.err_est = norm * res.err_est;
  out.precision_warning = noisy || res.err_est > 1e-6 * std::abs(res.value);
  return out;
}

double weyl_derivative(const Evaluable& f, const FractionalOrder& order, double t) {
  return weyl_derivative_detail(f, order, t).value;
}

double riemann_liouville(const Evaluable& f, double alpha, double t, double rel_tol) {
  if (!(alpha > 0.0)) throw DomainError("riemann_liouville: alpha must be > 0");
  if (!(t >= 0.0)) throw DomainError("riemann_liouville: t must be >= 0");
  if (t == 0.0) return 0.0;
  const auto spec = loose(rel_tol);
  auto g = [&](double u) { return u == 0.0 && alpha < 1.0 ? 0.0 : f(t - u) * std::pow(u, alpha - 1.0); };
  quad::EndpointHints near;
  if (alpha < 1.0) near.left = alpha - 1.0;
  const double mid = 0.5 * t;
  const double a = quad::integrate_adaptive(g, 0.0, mid, spec, near).value;
  const double b = quad::integrate_adaptive(g, mid, t, spec).value;
  return (a + b) / std::tgamma(alpha);
}

double fractional_parts_formula(const Evaluable& f, const FractionalOrder& order, int p, double t) {
  if (p < 0 || p > order.floor_alpha) throw DomainError("fractional_parts_formula: need 0 <= p <= floor(alpha)");
  const double rest = order.alpha - p;
  if (rest == 0.0) return weyl_derivative(f, order, t);
  Evaluable h([&f, order](double s) { return s <= 0.0 ? 0.0 : weyl_derivative(f, order, s); });
  h.support_end = f.support_end;
  h.end_exponent = f.end_exponent - order.alpha;
  h.scale = f.scale;
  if (f.tail_power) h.tail_power = *f.tail_power + order.alpha;
  const double sign = ((order.alpha_star + 1 + p) % 2 == 0) ? 1.0 : -1.0;
  return sign * weyl_integral(h, rest, t, 1e-9);
}

FractionalDerivativeResult build_F(const profiles::RadialProfile& profile, const FractionalOrder& order, int n,
                                   bool force_numeric) {
  if (n < 1) throw DomainError("build_F: dimension must be >= 1");
  FractionalDerivativeResult out;
  out.alpha = order;
  out.n = n;
  const double weight = 0.5 * (n - 1);
  const auto end = profile.support_end();
  const bool closed = !force_numeric && order.is_integer() && profile.has_closed_derivative(order.floor_alpha);
  out.provenance = closed ? Provenance::closed_form : Provenance::weyl_numeric;
  if (closed) {
    const int k = order.floor_alpha;
    out.F = [profile, k, weight, end](double t) {
      if (t <= 0.0 || (end && t >= *end)) return 0.0;
      return std::pow(t, weight) * profile.derivative(k, t).value;
    };
    return out;
  }
  Evaluable ev = profile.evaluable();
  if (force_numeric && order.is_integer()) {
    ev.derivative = {};
    ev.max_derivative = 0;
  }
  out.F = [ev, order, weight, end](double t) {
    if (t <= 0.0 || (end && t >= *end)) return 0.0;
    return std::pow(t, weight) * weyl_derivative(ev, order, t);
  };
  return out;
}

VariationEstimate total_variation(const std::function<double(double)>& F, Interval domain, double rel_tol,
                                  int initial_points) {
  if (!(domain.hi > domain.lo)) throw DomainError("total_variation: empty interval");
  if (initial_points < 2) initial_points = 2;
  constexpr int kMaxDepth = 24;
  constexpr std::size_t kMaxPoints = 1u << 22;

  struct Node {
    double x;
    double fx;
    int depth;
    bool active;  // the interval starting here still needs splitting
  };
  const bool geometric = domain.lo > 0.0 && domain.hi / domain.lo > 1e3;
  std::vector<Node> nodes(static_cast<std::size_t>(initial_points));
  for (int i = 0; i < initial_points; ++i) {
    const double s = static_cast<double>(i) / (initial_points - 1);
    double x = geometric ? domain.lo * std::pow(domain.hi / domain.lo, s) : domain.lo + s * (domain.hi - domain.lo);
    if (i == initial_points - 1) x = domain.hi;
    nodes[static_cast<std::size_t>(i)] = {x, 0.0, 0, true};
  }
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < initial_points; ++i) nodes[static_cast<std::size_t>(i)].fx = F(nodes[static_cast<std::size_t>(i)].x);

  auto variation = [](const std::vector<Node>& v) {
    double s = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) s += std::abs(v[i].fx - v[i - 1].fx);
    return s;
  };
  double current = variation(nodes);
  double prev_change = std::numeric_limits<double>::infinity();
  double last_change = std::numeric_limits<double>::infinity();
  bool exhausted = false;

  for (int sweep = 0; sweep < kMaxDepth + 1; ++sweep) {
    std::vector<std::size_t> split;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      if (nodes[i].active) split.push_back(i);
    if (split.empty()) break;
    if (nodes.size() + split.size() > kMaxPoints) {
      exhausted = true;
      break;
    }
    std::vector<double> mid_x(split.size()), mid_f(split.size());
    for (std::size_t j = 0; j < split.size(); ++j) mid_x[j] = 0.5 * (nodes[split[j]].x + nodes[split[j] + 1].x);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(split.size()); ++j)
      mid_f[static_cast<std::size_t>(j)] = F(mid_x[static_cast<std::size_t>(j)]);

    std::vector<Node> next;
    next.reserve(nodes.size() + split.size());
    std::size_t j = 0;
    const double floor_gain = 1e-15 * std::max(current, 1e-300);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (j < split.size() && split[j] == i) {
        const Node& a = nodes[i];
        const Node& b = nodes[i + 1];
        const double fm = mid_f[j];
        const double gain = std::abs(fm - a.fx) + std::abs(b.fx - fm) - std::abs(b.fx - a.fx);
        const bool more = gain > floor_gain && a.depth + 1 < kMaxDepth;
        next.push_back({a.x, a.fx, a.depth + 1, more});
        next.push_back({mid_x[j], fm, a.depth + 1, more});
        ++j;
      } else {
        Node keep = nodes[i];
        keep.active = false;
        next.push_back(keep);
      }
    }
    nodes.swap(next);
    // Intervals touching a discrete extremum keep refining even when the
    // last midpoint happened to add nothing.
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
      const double l = nodes[i].fx - nodes[i - 1].fx;
      const double r = nodes[i + 1].fx - nodes[i].fx;
      if (l * r <= 0.0 && (l != 0.0 || r != 0.0)) {
        if (nodes[i - 1].depth < kMaxDepth) nodes[i - 1].active = true;
        if (nodes[i].depth < kMaxDepth) nodes[i].active = true;
      }
    }
    const double updated = variation(nodes);
    prev_change = last_change;
    last_change = std::abs(updated - current) / std::max(updated, 1e-300);
    current = updated;
  }

  VariationEstimate out;
  out.total_variation = current;
  out.grid_resolution = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < nodes.size(); ++i) out.grid_resolution = std::min(out.grid_resolution, nodes[i].x - nodes[i - 1].x);
  const bool still_active = std::any_of(nodes.begin(), nodes.end(), [](const Node& n) { return n.active; });
  const bool settled = (last_change < rel_tol && prev_change < rel_tol) || !std::isfinite(last_change) ||
                       (!still_active && last_change < rel_tol);
  out.converged = !exhausted && settled;
  if (current == 0.0) out.converged = true;
  return out;
}

double modulus_of_continuity(const std::function<double(double)>& F, double delta, Interval domain,
                             int grid_points) {
  if (!(delta > 0.0)) throw DomainError("modulus_of_continuity: delta must be > 0");
  if (!(domain.hi > domain.lo)) throw DomainError("modulus_of_continuity: empty interval");
  if (grid_points < 2) grid_points = 2;
  const double step = (domain.hi - domain.lo) / (grid_points - 1);
  std::vector<double> v(static_cast<std::size_t>(grid_points));
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? domain.hi : domain.lo + i * step;
    v[static_cast<std::size_t>(i)] = F(x);
  }
  const auto window = static_cast<std::size_t>(std::floor(delta / step + 1e-9));
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t last = std::min(v.size() - 1, i + window);
    for (std::size_t j = i + 1; j <= last; ++j) best = std::max(best, std::abs(v[j] - v[i]));
  }
  return best;
}

}  // namespace radialft::fraccalc
