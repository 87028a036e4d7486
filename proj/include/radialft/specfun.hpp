#pragma once

// Bessel functions of the first kind, the two Bessel-type moment kernels
// used by the one-dimensional reduction, their large-argument expansions and
// a few classical integral identities used for verification.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "radialft/quad.hpp"

namespace radialft::specfun {

/// J_nu(x) for real nu >= -1 and x >= 0.
double bessel_j(double nu, double x);

/// Parameters of the moment kernels: 0 < alpha <= (n-1)/2, n >= 2.
struct KernelParams {
  double alpha = 1.0;
  int n = 3;

  void validate() const;
  /// alpha == (n-1)/2, the default order for dimension n.
  bool is_default_order() const;
};

/// Q(t) = ∫_0^1 (1-s)^(alpha-1) s^(n/2) J_{n/2-1}(ts) ds.
double kernel_Q(const KernelParams& p, double t);
/// q(t) = ∫_0^1 (1-s)^(alpha-1) s^(n/2-1) J_{n/2}(ts) ds.
double kernel_q(const KernelParams& p, double t);

/// Generic moment ∫_0^1 (1-s)^(alpha-1) s^lambda J_nu(x s) ds, evaluated by
/// series, quadrature or the full large-x expansion depending on x.
double bessel_moment(double alpha, double lambda, double nu, double x);
/// Always by adaptive quadrature (reference path).
double bessel_moment_quadrature(double alpha, double lambda, double nu, double x,
                                double abs_tol = 1e-15);

/// Radius above which the kernels switch to their asymptotic expansion.
double kernel_crossover(const KernelParams& p);

struct KernelAsymptotics {
  double zeta = 0.0;
  double main_coeff = 0.0;          // Gamma(alpha)
  double remainder_exponent = 0.0;  // -alpha - 3/2
};

KernelAsymptotics kernel_asymptotics(const KernelParams& p);

struct AsymptoticValue {
  double value = 0.0;
  double remainder_bound = 0.0;
};

/// Two-term expansion Gamma(alpha) r^-alpha J_{n/2+alpha}(r) + zeta r^(-n/2)
/// with an envelope C r^(-alpha-3/2) for the remainder. Requires r at or above
/// kernel_crossover(p).
AsymptoticValue kernel_q_asymptotic(const KernelParams& p, double r);

/// Closed form of zeta for q: 2^(n/2-1) Gamma(n/2).
double zeta_closed_form(int n);

struct ZetaCalibration {
  double alpha = 0.0;
  int n = 0;
  double zeta = 0.0;
  double fit_residual = 0.0;    // rms of the scaled fit residual
  double r_lo = 0.0;
  double r_hi = 0.0;
  double residual_slope = 0.0;  // log-log slope of the residual envelope
};

/// Least-squares fit of zeta from quadrature values of q on a geometric grid
/// in [r_lo, r_hi]. Results for the default window are cached in memory.
ZetaCalibration calibrate_zeta(const KernelParams& p, double r_lo = 1e2, double r_hi = 1e4);

/// CSV cache of calibrations (alpha,n,zeta,fit_residual,r_lo,r_hi).
void load_zeta_cache(const std::string& path);
void save_zeta_cache(const std::string& path);
std::vector<ZetaCalibration> zeta_cache_entries();

/// ∫_0^1 t^mu J_lambda(r t) dt, mu + lambda > -1.
double aux_integral(double mu, double lambda, double r);

/// Both sides of ∫_0^1 J_beta(rs) s^(beta+1) (1-s^2)^mu ds
///   = 2^mu Gamma(mu+1) r^(-mu-1) J_{beta+mu+1}(r).
std::pair<double, double> sw_identity_check(double beta, double mu, double r);

struct DiscontinuousIntegral {
  double value = 0.0;
  double err_est = 0.0;
  double closed_form = 0.0;
  bool converged = false;
};

/// ∫_0^∞ J_mu(a t) J_nu(b t) t^(mu-nu+1) dt for nu > mu > -1, a != b,
/// by accelerated panel summation, with the tabulated closed form
/// 2^(mu-nu+1) a^mu b^-nu (b^2-a^2)^(nu-mu-1) / Gamma(nu-mu) (b > a), 0 (b < a).
DiscontinuousIntegral weber_schafheitlin(double mu, double nu, double a, double b,
                                         int max_oscillations = 1000);

/// Piecewise-Chebyshev table of Q or q on [0, crossover] joined to the
/// asymptotic expansion beyond. Tables are built once per (alpha, n, kind)
/// and shared.
class KernelTable {
 public:
  enum class Kind { Q, q };
  static const KernelTable& get(const KernelParams& p, Kind kind);

  double operator()(double t) const;
  double crossover() const { return crossover_; }
  /// Non-oscillating and oscillating parts of the expansion; t >= crossover().
  double algebraic_part(double t) const { return algebraic_(t); }
  double oscillatory_part(double t) const { return oscillatory_(t); }

 private:
  KernelTable(const KernelParams& p, Kind kind);
  KernelParams params_;
  Kind kind_;
  double crossover_;
  quad::ChebyshevTable table_;
  double power_ = 0.0;
  std::function<double(double)> algebraic_;
  std::function<double(double)> oscillatory_;
};

}  // namespace radialft::specfun
