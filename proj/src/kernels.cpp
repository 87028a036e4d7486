#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "radialft/error.hpp"
#include "radialft/specfun.hpp"

namespace radialft::specfun {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kMaxTerms = 80;

double rgamma(double z) {
  if (z <= 0.0 && z == std::floor(z)) return 0.0;
  return 1.0 / std::tgamma(z);
}

// i^k for integer k.
cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Hankel coefficients a_k(nu), k = 0..count-1.
std::vector<double> hankel_coeffs(double nu, int count) {
  std::vector<double> a(static_cast<std::size_t>(count));
  a[0] = 1.0;
  const double mu = 4.0 * nu * nu;
  for (int k = 1; k < count; ++k) {
    const double odd = 2.0 * k - 1.0;
    a[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k - 1)] * (mu - odd * odd) / (8.0 * k);
  }
  return a;
}

// Large-x expansion of ∫_0^1 (1-s)^(alpha-1) s^lambda J_nu(xs) ds: an
// algebraic series from s = 0 and an oscillatory series from s = 1.
struct MomentExpansion {
  double alpha = 0.0;
  double lambda = 0.0;
  double nu = 0.0;
  std::vector<double> alg;  // coefficient of x^(-lambda-k-1)
  std::vector<cplx> osc;    // coefficient of x^(-alpha-N) inside Re[...]

  MomentExpansion(double a, double l, double v) : alpha(a), lambda(l), nu(v) {
    double g = 1.0;  // (1-alpha)_k / k!
    for (int k = 0; k < kMaxTerms; ++k) {
      const double m = lambda + k;
      const double mel = std::pow(2.0, m) * std::tgamma(0.5 * (nu + m + 1.0)) * rgamma(0.5 * (nu - m + 1.0));
      alg.push_back(g * mel);
      g *= (k + 1.0 - alpha) / (k + 1.0);
    }
    const std::vector<double> ak = hankel_coeffs(nu, kMaxTerms);
    for (int big_n = 0; big_n < kMaxTerms; ++big_n) {
      cplx c = 0.0;
      for (int k = 0; k <= big_n; ++k) {
        const int m = big_n - k;
        const double ck = lambda - 0.5 - k;
        double binom = 1.0;
        for (int j = 0; j < m; ++j) binom *= (ck - j) / (j + 1.0);
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        const cplx phase = std::polar(1.0, -0.5 * kPi * (alpha + m));
        c += ipow(k) * ak[static_cast<std::size_t>(k)] * binom * sgn * std::tgamma(alpha + m) * phase;
      }
      osc.push_back(c);
    }
  }

  double algebraic(double x) const {
    double sum = 0.0;
    double scale = std::pow(x, -lambda - 1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < alg.size(); ++k, scale /= x) {
      const double term = alg[k] * scale;
      if (term == 0.0) continue;
      if (std::abs(term) > prev && k > 2) break;
      prev = std::abs(term);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }

  double oscillatory(double x) const {
    cplx sum = 0.0;
    double scale = std::pow(x, -alpha);
    double prev = std::numeric_limits<double>::infinity();
    double prev2 = prev;
    for (std::size_t k = 0; k < osc.size(); ++k, scale /= x) {
      const cplx term = osc[k] * scale;
      const double mag = std::abs(term);
      // Compare with the larger of the last two terms so an accidental zero
      // coefficient does not end the series early.
      if (mag > std::max(prev, prev2) && k > 2) break;
      prev2 = prev;
      prev = mag;
      sum += term;
      if (k > 2 && mag < 1e-18 * std::abs(sum)) break;
    }
    const double theta = -0.5 * nu * kPi - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) * std::real(std::polar(1.0, x + theta) * sum);
  }

  double operator()(double x) const { return algebraic(x) + oscillatory(x); }
};

double moment_series(double alpha, double lambda, double nu, double x) {
  const double h = 0.5 * x;
  double b = lambda + nu + 1.0;
  double beta = std::exp(std::lgamma(alpha) + std::lgamma(b) - std::lgamma(alpha + b));
  double coef = std::pow(h, nu) / std::tgamma(nu + 1.0);
  double sum = coef * beta;
  for (int j = 1; j < 400; ++j) {
    coef *= -h * h / (j * (j + nu));
    beta *= b * (b + 1.0) / ((alpha + b) * (alpha + b + 1.0));
    b += 2.0;
    const double term = coef * beta;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

constexpr double kSeriesLimit = 4.0;

double moment_crossover(double alpha) { return 40.0 + 10.0 * alpha; }

}  // namespace

void KernelParams::validate() const {
  if (n < 2) throw DomainError("kernel: dimension n must be >= 2");
  if (!(alpha > 0.0) || alpha > 0.5 * (n - 1) + 1e-12)
    throw DomainError("kernel: alpha must satisfy 0 < alpha <= (n-1)/2");
}

bool KernelParams::is_default_order() const { return std::abs(alpha - 0.5 * (n - 1)) < 1e-12; }

double kernel_crossover(const KernelParams& p) { return moment_crossover(p.alpha); }

double bessel_moment_quadrature(double alpha, double lambda, double nu, double x, double abs_tol) {
  if (!(alpha > 0.0)) throw DomainError("bessel_moment: alpha must be positive");
  // Pieces of about four radians each; at least two so that the last piece
  // stays away from s = 0.
  const int pieces = std::max(2, static_cast<int>(std::ceil(x / 4.0)));
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  spec.abs_tol = abs_tol;
  spec.strict = false;
  double sum = 0.0;
  const double w = 1.0 / pieces;
  auto f = [=](double s) { return std::pow(1.0 - s, alpha - 1.0) * std::pow(s, lambda) * bessel_j(nu, x * s); };
  for (int i = 0; i + 1 < pieces; ++i) sum += quad::integrate_adaptive(f, i * w, (i + 1) * w, spec).value;
  const double s0 = (pieces - 1) * w;
  const double width = 1.0 - s0;
  if (alpha < 1.0) {
    // s = 1 - width * u^(1/alpha) absorbs (1-s)^(alpha-1).
    auto g = [=](double u) {
      const double s = 1.0 - width * std::pow(u, 1.0 / alpha);
      return std::pow(s, lambda) * bessel_j(nu, x * s);
    };
    sum += std::pow(width, alpha) / alpha * quad::integrate_adaptive(g, 0.0, 1.0, spec).value;
  } else if (alpha != std::floor(alpha)) {
    // Fractional power of (1-s) with a bounded but non-smooth endpoint:
    // Gauss-Jacobi with the power as weight.
    static thread_local std::map<double, std::pair<std::vector<double>, std::vector<double>>> rules;
    auto it = rules.find(alpha);
    if (it == rules.end()) it = rules.emplace(alpha, quad::gauss_jacobi(40, alpha - 1.0, 0.0)).first;
    const auto& [nodes, weights] = it->second;
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double s = s0 + 0.5 * width * (1.0 + nodes[j]);
      acc += weights[j] * std::pow(s, lambda) * bessel_j(nu, x * s);
    }
    sum += std::pow(0.5 * width, alpha) * acc;
  } else {
    sum += quad::integrate_adaptive(f, s0, 1.0, spec).value;
  }
  return sum;
}

double bessel_moment(double alpha, double lambda, double nu, double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_moment: x must be >= 0");
  if (x <= kSeriesLimit) return moment_series(alpha, lambda, nu, x);
  if (x < moment_crossover(alpha)) return bessel_moment_quadrature(alpha, lambda, nu, x);
  return MomentExpansion(alpha, lambda, nu)(x);
}

double kernel_Q(const KernelParams& p, double t) {
  p.validate();
  return bessel_moment(p.alpha, 0.5 * p.n, 0.5 * p.n - 1.0, t);
}

double kernel_q(const KernelParams& p, double t) {
  p.validate();
  return bessel_moment(p.alpha, 0.5 * p.n - 1.0, 0.5 * p.n, t);
}

double zeta_closed_form(int n) { return std::pow(2.0, 0.5 * n - 1.0) * std::tgamma(0.5 * n); }

namespace {

std::mutex g_zeta_mutex;
std::map<std::pair<double, int>, ZetaCalibration> g_zeta;

// Envelope constant C with |q - two-term expansion| <= C r^(-alpha-3/2) for
// r >= crossover, from absolute sums of the dropped expansion coefficients.
double remainder_constant(const KernelParams& p) {
  const double lambda = 0.5 * p.n - 1.0;
  const double nu = 0.5 * p.n;
  const double r0 = moment_crossover(p.alpha);
  MomentExpansion e(p.alpha, lambda, nu);
  const std::vector<double> am = hankel_coeffs(nu + p.alpha, kMaxTerms);
  const cplx main_phase = std::tgamma(p.alpha) * std::polar(1.0, -0.5 * kPi * p.alpha);
  double osc = 0.0;
  double scale = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < kMaxTerms; ++k, scale /= r0) {
    const double mag = std::abs(e.osc[static_cast<std::size_t>(k)] - ipow(k) * am[static_cast<std::size_t>(k)] * main_phase) * scale;
    if (mag > prev && k > 3) break;
    prev = mag;
    osc += mag;
  }
  osc *= std::sqrt(2.0 / kPi);
  double alg = 0.0;
  scale = std::pow(r0, p.alpha + 0.5 - 0.5 * p.n);
  prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < kMaxTerms; ++k) {
    scale /= r0;
    const double mag = std::abs(e.alg[static_cast<std::size_t>(k)]) * scale * r0;
    if (mag == 0.0) continue;
    if (mag > prev && k > 3) break;
    prev = mag;
    alg += mag;
  }
  return 1.25 * (osc + alg);
}

}  // namespace

KernelAsymptotics kernel_asymptotics(const KernelParams& p) {
  p.validate();
  return {calibrate_zeta(p).zeta, std::tgamma(p.alpha), -p.alpha - 1.5};
}

AsymptoticValue kernel_q_asymptotic(const KernelParams& p, double r) {
  p.validate();
  if (r < kernel_crossover(p))
    throw DomainError("kernel_q_asymptotic: r below the crossover radius " + std::to_string(kernel_crossover(p)));
  const KernelAsymptotics k = kernel_asymptotics(p);
  const double value = k.main_coeff * std::pow(r, -p.alpha) * bessel_j(0.5 * p.n + p.alpha, r) +
                       k.zeta * std::pow(r, -0.5 * p.n);
  return {value, remainder_constant(p) * std::pow(r, k.remainder_exponent)};
}

ZetaCalibration calibrate_zeta(const KernelParams& p, double r_lo, double r_hi) {
  p.validate();
  if (!(r_lo > 0.0) || !(r_hi > 2.0 * r_lo)) throw DomainError("calibrate_zeta: need 0 < r_lo < r_hi/2");
  const bool default_window = r_lo == 1e2 && r_hi == 1e4;
  if (default_window) {
    std::lock_guard<std::mutex> lock(g_zeta_mutex);
    auto it = g_zeta.find({p.alpha, p.n});
    if (it != g_zeta.end()) return it->second;
  }
  constexpr int kBlocks = 8;
  constexpr int kPerBlock = 12;
  constexpr int kPoints = kBlocks * kPerBlock;
  const double lambda = 0.5 * p.n - 1.0;
  const double nu = 0.5 * p.n;
  std::vector<double> r(kPoints), y(kPoints);
  for (int j = 0; j < kPoints; ++j) r[j] = r_lo * std::pow(r_hi / r_lo, j / (kPoints - 1.0));
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < kPoints; ++j) {
    const double q = bessel_moment_quadrature(p.alpha, lambda, nu, r[j], 1e-17);
    y[j] = q - std::tgamma(p.alpha) * std::pow(r[j], -p.alpha) * bessel_j(nu + p.alpha, r[j]);
  }
  // Weighted model y r^(n/2) = zeta + c1 r^e cos r + c2 r^e sin r + c3 / r,
  // e = n/2 - alpha - 3/2; the extra terms soak up the known remainder.
  constexpr int kBasis = 4;
  double ata[kBasis][kBasis] = {};
  double atb[kBasis] = {};
  const double e = 0.5 * p.n - p.alpha - 1.5;
  auto basis = [&](double rr, double out[kBasis]) {
    out[0] = 1.0;
    out[1] = std::pow(rr, e) * std::cos(rr);
    out[2] = std::pow(rr, e) * std::sin(rr);
    out[3] = 1.0 / rr;
  };
  for (int j = 0; j < kPoints; ++j) {
    double phi[kBasis];
    basis(r[j], phi);
    const double target = y[j] * std::pow(r[j], 0.5 * p.n);
    for (int a = 0; a < kBasis; ++a) {
      atb[a] += phi[a] * target;
      for (int b = 0; b < kBasis; ++b) ata[a][b] += phi[a] * phi[b];
    }
  }
  // Gaussian elimination with partial pivoting.
  double coef[kBasis];
  for (int c = 0; c < kBasis; ++c) {
    int piv = c;
    for (int rr = c + 1; rr < kBasis; ++rr)
      if (std::abs(ata[rr][c]) > std::abs(ata[piv][c])) piv = rr;
    for (int k = 0; k < kBasis; ++k) std::swap(ata[c][k], ata[piv][k]);
    std::swap(atb[c], atb[piv]);
    for (int rr = c + 1; rr < kBasis; ++rr) {
      const double f = ata[rr][c] / ata[c][c];
      for (int k = c; k < kBasis; ++k) ata[rr][k] -= f * ata[c][k];
      atb[rr] -= f * atb[c];
    }
  }
  for (int c = kBasis - 1; c >= 0; --c) {
    double s = atb[c];
    for (int k = c + 1; k < kBasis; ++k) s -= ata[c][k] * coef[k];
    coef[c] = s / ata[c][c];
  }

  ZetaCalibration out;
  out.alpha = p.alpha;
  out.n = p.n;
  out.zeta = coef[0];
  out.r_lo = r_lo;
  out.r_hi = r_hi;
  double ss = 0.0;
  for (int j = 0; j < kPoints; ++j) {
    double phi[kBasis];
    basis(r[j], phi);
    double model = 0.0;
    for (int a = 0; a < kBasis; ++a) model += coef[a] * phi[a];
    const double d = y[j] * std::pow(r[j], 0.5 * p.n) - model;
    ss += d * d;
  }
  out.fit_residual = std::sqrt(ss / kPoints);

  // Envelope slope of the one-term residual from per-block maxima.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int b = 0; b < kBlocks; ++b) {
    double best = 0.0, at = r[b * kPerBlock];
    for (int j = b * kPerBlock; j < (b + 1) * kPerBlock; ++j) {
      const double res = std::abs(y[j] - out.zeta * std::pow(r[j], -0.5 * p.n));
      if (res > best) best = res, at = r[j];
    }
    const double lx = std::log(at), ly = std::log(best);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  out.residual_slope = (kBlocks * sxy - sx * sy) / (kBlocks * sxx - sx * sx);
  if (std::abs(out.residual_slope - (-p.alpha - 1.5)) > 0.2)
    throw ToleranceError("calibrate_zeta: residual decay exponent " + std::to_string(out.residual_slope) +
                             " deviates from " + std::to_string(-p.alpha - 1.5),
                         out.zeta, out.fit_residual);
  if (default_window) {
    std::lock_guard<std::mutex> lock(g_zeta_mutex);
    g_zeta.emplace(std::make_pair(p.alpha, p.n), out);
  }
  return out;
}

void load_zeta_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;
  std::string line;
  std::getline(in, line);
  if (line != "alpha,n,zeta,fit_residual,r_lo,r_hi") throw ParseError("zeta cache: unexpected header in " + path);
  std::lock_guard<std::mutex> lock(g_zeta_mutex);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    ZetaCalibration c;
    char comma = 0;
    if (!(ss >> c.alpha >> comma >> c.n >> comma >> c.zeta >> comma >> c.fit_residual >> comma >> c.r_lo >> comma >>
          c.r_hi))
      throw ParseError("zeta cache: malformed row '" + line + "'");
    c.residual_slope = -c.alpha - 1.5;
    if (c.r_lo == 1e2 && c.r_hi == 1e4) g_zeta.emplace(std::make_pair(c.alpha, c.n), c);
  }
}

void save_zeta_cache(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("zeta cache: cannot write " + path);
  out << "alpha,n,zeta,fit_residual,r_lo,r_hi\n";
  char buf[256];
  for (const auto& c : zeta_cache_entries()) {
    std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", c.alpha, c.n, c.zeta, c.fit_residual, c.r_lo,
                  c.r_hi);
    out << buf;
  }
}

std::vector<ZetaCalibration> zeta_cache_entries() {
  std::lock_guard<std::mutex> lock(g_zeta_mutex);
  std::vector<ZetaCalibration> out;
  for (const auto& [key, c] : g_zeta) out.push_back(c);
  return out;
}

namespace {
std::mutex g_table_mutex;
std::map<std::tuple<double, int, int>, std::unique_ptr<KernelTable>> g_tables;

struct KernelSpec {
  double lambda;
  double nu;
};

KernelSpec spec_for(const KernelParams& p, KernelTable::Kind kind) {
  if (kind == KernelTable::Kind::Q) return {0.5 * p.n, 0.5 * p.n - 1.0};
  return {0.5 * p.n - 1.0, 0.5 * p.n};
}

}  // namespace

KernelTable::KernelTable(const KernelParams& p, Kind kind) : params_(p), kind_(kind), crossover_(kernel_crossover(p)) {
  const KernelSpec s = spec_for(p, kind);
  const int panels = static_cast<int>(std::ceil(crossover_));
  // Tabulate kernel / t^nu, an entire function of t, so odd dimensions do
  // not leave a half-integer power at the origin.
  table_ = quad::ChebyshevTable(
      [&](double t) { return bessel_moment(p.alpha, s.lambda, s.nu, t) / std::pow(t, s.nu); }, 0.0, crossover_,
      panels, 18);
  power_ = s.nu;
  auto e = std::make_shared<const MomentExpansion>(p.alpha, s.lambda, s.nu);
  algebraic_ = [e](double t) { return e->algebraic(t); };
  oscillatory_ = [e](double t) { return e->oscillatory(t); };
}

const KernelTable& KernelTable::get(const KernelParams& p, Kind kind) {
  p.validate();
  const auto key = std::make_tuple(p.alpha, p.n, static_cast<int>(kind));
  {
    std::lock_guard<std::mutex> lock(g_table_mutex);
    auto it = g_tables.find(key);
    if (it != g_tables.end()) return *it->second;
  }
  // Built outside the lock (the build itself runs in parallel); the first
  // finished table wins and later identical ones are discarded.
  std::unique_ptr<KernelTable> fresh(new KernelTable(p, kind));
  std::lock_guard<std::mutex> lock(g_table_mutex);
  auto [it, inserted] = g_tables.emplace(key, std::move(fresh));
  return *it->second;
}

double KernelTable::operator()(double t) const {
  if (t < crossover_) return table_(t) * std::pow(t, power_);
  return algebraic_(t) + oscillatory_(t);
}

}  // namespace radialft::specfun
