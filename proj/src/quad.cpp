#include "radialft/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <Eigen/Eigenvalues>

#include "radialft/error.hpp"
#include "radialft/specfun.hpp"

namespace radialft::quad {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600657949870, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes.
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double err;
  double resabs;
  int depth;
};

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const { return x.err < y.err; }
};

Segment gk21(const Integrand& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv1[10];
  double fv2[10];
  const double fc = f(center);
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  double resg = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double abshalf = std::abs(half);
  const double value = resk * half;
  resabs *= abshalf;
  resasc *= abshalf;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(50.0 * kEps * resabs, err);
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
  return {a, b, value, err, resabs, depth};
}

QuadResult adaptive_core(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  constexpr std::size_t kMaxSegments = 1u << 15;
  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  std::vector<Segment> frozen;
  Segment first = gk21(f, a, b, 0);
  heap.push(first);
  double total = first.value;
  double total_err = first.err;
  double total_abs = first.resabs;
  double frozen_err = 0.0;
  int evals = 21;
  bool converged = false;

  while (true) {
    const double tol = std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 100.0 * kEps * total_abs});
    if (total_err <= tol) {
      converged = true;
      break;
    }
    // Segments at the depth limit can no longer improve.
    if (frozen_err > tol || heap.empty() || heap.size() + frozen.size() >= kMaxSegments) break;
    Segment worst = heap.top();
    heap.pop();
    if (worst.depth >= spec.max_depth) {
      frozen.push_back(worst);
      frozen_err += worst.err;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gk21(f, worst.a, mid, worst.depth + 1);
    Segment right = gk21(f, mid, worst.b, worst.depth + 1);
    evals += 42;
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    total_abs += left.resabs + right.resabs - worst.resabs;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum in a fixed order so round-off drift in the running totals does
  // not leak into the result.
  std::vector<Segment> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  double value = 0.0;
  double err = 0.0;
  for (const auto& s : all) {
    value += s.value;
    err += s.err;
  }
  QuadResult out{value, err, evals, converged};
  if (!converged && spec.strict)
    throw ToleranceError("integrate_adaptive: tolerance not met (err_est " + std::to_string(err) + ")",
                         value, err);
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("QuadratureSpec: tolerances must be positive");
  if (max_depth < 1) throw DomainError("QuadratureSpec: max_depth must be >= 1");
  if (max_oscillations < 4) throw DomainError("QuadratureSpec: max_oscillations must be >= 4");
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                              const EndpointHints& hints) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw DomainError("integrate_adaptive: need finite a < b");
  const bool sing_left = hints.left && *hints.left < 0.0;
  const bool sing_right = hints.right && *hints.right < 0.0;
  for (const auto& h : {hints.left, hints.right})
    if (h && !(*h > -1.0)) throw DomainError("integrate_adaptive: endpoint exponent must exceed -1");

  if (sing_left && sing_right) {
    const double mid = 0.5 * (a + b);
    QuadratureSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;
    QuadResult l = integrate_adaptive(f, a, mid, half, {hints.left, std::nullopt});
    QuadResult r = integrate_adaptive(f, mid, b, half, {std::nullopt, hints.right});
    return {l.value + r.value, l.err_est + r.err_est, l.evaluations + r.evaluations,
            l.converged && r.converged};
  }
  if (sing_left || sing_right) {
    const double p = 1.0 / ((sing_left ? *hints.left : *hints.right) + 1.0);
    const double len = b - a;
    Integrand g = [&f, a, b, p, len, sing_left](double u) {
      const double off = len * std::pow(u, p);
      double x = sing_left ? a + off : b - off;
      if (sing_left && x <= a) x = std::nextafter(a, b);
      if (!sing_left && x >= b) x = std::nextafter(b, a);
      return f(x) * len * p * std::pow(u, p - 1.0);
    };
    return adaptive_core(g, 0.0, 1.0, spec);
  }
  return adaptive_core(f, a, b, spec);
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = z;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

std::pair<std::vector<double>, std::vector<double>> gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_jacobi: n must be >= 1");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  // Golub-Welsch: eigen-decomposition of the Jacobi matrix of the recurrence.
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n, n);
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double d = 2.0 * k + ab;
    jm(k, k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (d * (d + 2.0));
    if (k + 1 < n) {
      const int m = k + 1;
      const double dm = 2.0 * m + ab;
      const double num = (m == 1) ? 4.0 * (1.0 + a) * (1.0 + b)
                                  : 4.0 * m * (m + a) * (m + b) * (m + ab);
      const double den = (m == 1) ? dm * dm * (dm + 1.0) : dm * dm * (dm + 1.0) * (dm - 1.0);
      jm(k, k + 1) = jm(k + 1, k) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(ab + 2.0));
  std::vector<double> x(n), w(n);
  for (int j = 0; j < n; ++j) {
    x[j] = es.eigenvalues()(j);
    const double v = es.eigenvectors()(0, j);
    w[j] = mu0 * v * v;
  }
  return {x, w};
}

OscillatorySplit OscillatorySplit::bessel(double order, double scale) {
  if (!(order >= -1.0)) throw DomainError("OscillatorySplit::bessel: order must be >= -1");
  if (!(scale > 0.0)) throw DomainError("OscillatorySplit::bessel: scale must be positive");
  return {Kind::bessel, order, scale};
}

OscillatorySplit OscillatorySplit::trig(double frequency, double phase) {
  if (!(frequency > 0.0)) throw DomainError("OscillatorySplit::trig: frequency must be positive");
  return {Kind::trig, frequency, phase};
}

double OscillatorySplit::operator()(double t) const {
  if (kind_ == Kind::trig) return std::sin(p1_ * t + p2_);
  return specfun::bessel_j(p1_, p2_ * t);
}

std::vector<double> OscillatorySplit::zeros_after(double a, std::size_t count) const {
  std::vector<double> out;
  out.reserve(count);
  const double pi = std::numbers::pi;
  if (kind_ == Kind::trig) {
    // sin(w t + phase) = 0  <=>  t = (k pi - phase) / w
    double k = std::floor((p1_ * a + p2_) / pi) + 1.0;
    while (out.size() < count) {
      const double t = (k * pi - p2_) / p1_;
      if (t > a) out.push_back(t);
      k += 1.0;
    }
    return out;
  }
  // McMahon's expansion for the k-th zero of J_nu, one Newton step.
  const double nu = p1_;
  const double mu = 4.0 * nu * nu;
  auto refine = [nu](double x) {
    const double j = specfun::bessel_j(nu, x);
    const double dj = nu - 1.0 >= -1.0 ? specfun::bessel_j(nu - 1.0, x) - nu / x * j
                                       : nu / x * j - specfun::bessel_j(nu + 1.0, x);
    return dj != 0.0 ? x - j / dj : x;
  };
  const double xa = a * p2_;
  double k = std::max(1.0, std::floor(xa / pi - nu / 2.0 + 0.25) - 1.0);
  double last = -1.0;
  while (out.size() < count) {
    const double beta = (k + nu / 2.0 - 0.25) * pi;
    const double eb = 8.0 * beta;
    double x = beta - (mu - 1.0) / eb - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * eb * eb * eb);
    if (x > 0.0) x = refine(x);
    k += 1.0;
    if (x <= xa || x <= last) continue;
    last = x;
    out.push_back(x / p2_);
  }
  return out;
}

std::pair<double, double> epsilon_limit(const std::vector<double>& s) {
  const std::size_t m = s.size();
  if (m == 0) return {0.0, 0.0};
  if (m < 3) return {s.back(), m == 2 ? std::abs(s[1] - s[0]) : 0.0};
  // Columns of the epsilon table; even columns hold the accelerated values.
  std::vector<double> prev(m, 0.0);
  std::vector<double> cur(s);
  double best = s.back();
  double best_err = std::abs(s[m - 1] - s[m - 2]);
  for (std::size_t col = 1; col < m; ++col) {
    const std::size_t len = m - col;
    std::vector<double> next(len);
    bool broke = false;
    for (std::size_t j = 0; j < len; ++j) {
      const double diff = cur[j + 1] - cur[j];
      if (diff == 0.0 || !std::isfinite(diff)) {
        broke = true;
        break;
      }
      next[j] = prev[j + 1] + 1.0 / diff;
    }
    if (broke) {
      // The previous column has converged exactly.
      if (col % 2 == 1) return {cur.back(), 0.0};
      break;
    }
    if (col % 2 == 0 && len >= 2) {
      const double e = std::abs(next[len - 1] - next[len - 2]);
      if (e <= best_err) {
        best = next[len - 1];
        best_err = e;
      }
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {best, best_err};
}

OscillatoryResult integrate_panels_accelerated(const Integrand& f,
                                               const std::function<double(int)>& breakpoint,
                                               const QuadratureSpec& spec) {
  spec.validate();
  constexpr std::size_t kWindow = 30;
  QuadratureSpec panel_spec = spec;
  panel_spec.strict = false;
  panel_spec.rel_tol = std::min(spec.rel_tol, 1e-11);
  panel_spec.abs_tol = spec.abs_tol * 0.01;

  OscillatoryResult out;
  std::vector<double> partial;
  std::vector<double> magnitude;
  double sum = 0.0;
  double panel_err = 0.0;
  double prev_est = std::numeric_limits<double>::quiet_NaN();
  int stable = 0;
  double left = breakpoint(0);
  for (int k = 0; k < spec.max_oscillations; ++k) {
    const double right = breakpoint(k + 1);
    QuadResult p = integrate_adaptive(f, left, right, panel_spec);
    left = right;
    sum += p.value;
    panel_err += p.err_est;
    partial.push_back(sum);
    magnitude.push_back(std::abs(p.value));
    out.panels = k + 1;
    if (partial.size() < 8) continue;

    const std::size_t n = partial.size();
    const std::size_t from = n > kWindow ? n - kWindow : 0;
    auto [est, err] = epsilon_limit({partial.begin() + static_cast<std::ptrdiff_t>(from), partial.end()});
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(est));

    // Panel sizes must have decayed before an extrapolated value is trusted;
    // otherwise the epsilon algorithm happily sums divergent series.
    const double head = (magnitude[1] + magnitude[2] + magnitude[3] + magnitude[4]) / 4.0;
    const double tail = (magnitude[n - 1] + magnitude[n - 2] + magnitude[n - 3] + magnitude[n - 4]) / 4.0;
    const bool decaying = tail <= 0.7 * head || tail <= tol;

    if (decaying && std::isfinite(prev_est) && std::abs(est - prev_est) <= tol && err <= 10.0 * tol) {
      ++stable;
    } else {
      stable = 0;
    }
    prev_est = est;
    out.value = est;
    out.err_est = std::max(std::abs(err), panel_err);
    if (stable >= 2) {
      out.converged = true;
      out.err_est = std::max({std::abs(err), panel_err, spec.abs_tol * 0.1});
      return out;
    }
  }
  const std::size_t n = magnitude.size();
  const std::size_t q = n / 4;
  double first = 0.0, last = 0.0;
  for (std::size_t i = 1; i <= q; ++i) first += magnitude[i];
  for (std::size_t i = n - q; i < n; ++i) last += magnitude[i];
  out.diverged = last >= 0.5 * first;
  return out;
}

OscillatoryResult integrate_oscillatory(const Integrand& envelope, const OscillatorySplit& osc, double a,
                                        const QuadratureSpec& spec) {
  spec.validate();
  std::vector<double> zeros = osc.zeros_after(a, static_cast<std::size_t>(spec.max_oscillations) + 1);
  Integrand f = [&envelope, &osc](double t) { return envelope(t) * osc(t); };
  // The first panel runs from `a` to the first zero and is folded into the
  // leading partial sum.
  auto bp = [&zeros, a](int k) { return k == 0 ? a : zeros[static_cast<std::size_t>(k - 1)]; };
  return integrate_panels_accelerated(f, bp, spec);
}

LimitResult limit_extrapolate(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 4) throw DomainError("limit_extrapolate: need at least 4 samples");
  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].first > 0.0)) throw DomainError("limit_extrapolate: A must be positive");
    if (i > 0 && samples[i].first == samples[i - 1].first)
      throw DomainError("limit_extrapolate: duplicate A");
  }
  // Neville's scheme in h = 1/A, evaluated at h = 0, adding samples from the
  // largest A downward.
  const std::size_t m = samples.size();
  std::vector<double> h(m), p(m);
  for (std::size_t i = 0; i < m; ++i) {
    h[i] = 1.0 / samples[m - 1 - i].first;
    p[i] = samples[m - 1 - i].second;
  }
  // T[i][k] extrapolates samples i..i+k.
  std::vector<std::vector<double>> T(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) T[i][0] = p[i];
  for (std::size_t k = 1; k < m; ++k)
    for (std::size_t i = 0; i + k < m; ++i)
      T[i][k] = (h[i + k] * T[i][k - 1] - h[i] * T[i + 1][k - 1]) / (h[i + k] - h[i]);
  std::vector<double> diag;
  for (std::size_t k = 0; k < m; ++k) diag.push_back(T[0][k]);

  LimitResult out;
  out.limit = diag.back();
  out.err_est = std::abs(diag[m - 1] - diag[m - 2]);
  const double d1 = std::abs(diag[m - 2] - diag[m - 3]);
  const double scale = std::max(1.0, std::abs(out.limit));
  out.diverged = out.err_est > d1 && out.err_est > 1e-12 * scale && d1 > 0.0 &&
                 std::abs(diag[m - 1]) > std::abs(diag[m - 2]) && std::abs(diag[m - 2]) > std::abs(diag[m - 3]);
  return out;
}

ChebyshevTable::ChebyshevTable(const Integrand& f, double a, double b, int panels, int degree)
    : a_(a), b_(b), width_((b - a) / panels), panels_(panels), degree_(degree) {
  if (!(a < b) || panels < 1 || degree < 1) throw DomainError("ChebyshevTable: bad layout");
  const int np = degree + 1;
  std::vector<double> values(static_cast<std::size_t>(panels) * np);
  const double pi = std::numbers::pi;
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < panels * np; ++idx) {
    const int p = idx / np;
    const int j = idx % np;
    const double node = std::cos(pi * (j + 0.5) / np);
    const double lo = a + p * width_;
    values[static_cast<std::size_t>(idx)] = f(lo + 0.5 * width_ * (node + 1.0));
  }
  coeffs_.assign(values.size(), 0.0);
  for (int p = 0; p < panels; ++p) {
    for (int k = 0; k < np; ++k) {
      double c = 0.0;
      for (int j = 0; j < np; ++j) c += values[static_cast<std::size_t>(p * np + j)] * std::cos(pi * k * (j + 0.5) / np);
      c *= 2.0 / np;
      if (k == 0) c *= 0.5;
      coeffs_[static_cast<std::size_t>(p * np + k)] = c;
    }
  }
}

double ChebyshevTable::operator()(double x) const {
  int p = static_cast<int>(std::floor((x - a_) / width_));
  p = std::clamp(p, 0, panels_ - 1);
  const double lo = a_ + p * width_;
  const double y = 2.0 * (x - lo) / width_ - 1.0;
  const double* c = coeffs_.data() + static_cast<std::size_t>(p) * (degree_ + 1);
  double b1 = 0.0, b2 = 0.0;
  for (int k = degree_; k >= 1; --k) {
    const double b0 = 2.0 * y * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return y * b1 - b2 + c[0];
}

CompositeRule composite_rule(double a, double b, double max_width, const std::vector<double>& graded_points,
                             int order, int grading_levels) {
  if (!(b > a)) throw DomainError("composite_rule: empty interval");
  if (!(max_width > 0.0)) throw DomainError("composite_rule: panel width must be positive");
  std::vector<double> cuts{a, b};
  for (double p : graded_points)
    if (p > a && p < b) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto graded = [&](double p) {
    return std::any_of(graded_points.begin(), graded_points.end(), [p](double g) { return g == p; });
  };

  std::vector<std::pair<double, double>> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double p = cuts[i];
    const double q = cuts[i + 1];
    const bool gl = graded(p);
    const bool gr = graded(q);
    const double zone = std::min(max_width, (q - p) / ((gl && gr) ? 2.0 : 1.0));
    double lo = p;
    double hi = q;
    if (gl) {
      double w = zone * std::ldexp(1.0, -grading_levels);
      panels.emplace_back(p, p + w);
      for (int j = grading_levels; j > 0; --j, w *= 2.0) panels.emplace_back(p + w, p + 2.0 * w);
      lo = p + zone;
    }
    std::vector<std::pair<double, double>> right;
    if (gr) {
      double w = zone * std::ldexp(1.0, -grading_levels);
      right.emplace_back(q - w, q);
      for (int j = grading_levels; j > 0; --j, w *= 2.0) right.emplace_back(q - 2.0 * w, q - w);
      hi = q - zone;
    }
    if (hi > lo) {
      const int m = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width - 1e-9)));
      for (int k = 0; k < m; ++k) {
        const double x0 = lo + (hi - lo) * k / m;
        const double x1 = k + 1 == m ? hi : lo + (hi - lo) * (k + 1) / m;
        panels.emplace_back(x0, x1);
      }
    }
    for (auto it = right.rbegin(); it != right.rend(); ++it) panels.push_back(*it);
  }

  const auto [x, w] = gauss_legendre(order);
  CompositeRule rule;
  rule.nodes.reserve(panels.size() * x.size());
  rule.weights.reserve(panels.size() * x.size());
  for (const auto& [p0, p1] : panels) {
    const double c = 0.5 * (p0 + p1);
    const double h = 0.5 * (p1 - p0);
    for (std::size_t k = 0; k < x.size(); ++k) {
      rule.nodes.push_back(c + h * x[k]);
      rule.weights.push_back(h * w[k]);
    }
  }
  return rule;
}

}  // namespace radialft::quad
