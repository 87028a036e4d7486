#pragma once

// Fourier transforms of radial functions: the fractional-derivative
// representation, the direct Hankel-type integral, Bochner-Riesz means for
// inversion, and the large-r asymptotics for compactly supported profiles.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radialft/fraccalc.hpp"
#include "radialft/profiles.hpp"

namespace radialft::transform {

enum class Method { eq6, direct, asymptotic, automatic };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// Identifier of the sign (-1)^(alpha*+1) in front of the fractional
/// representation, confirmed against the direct integral for every parity
/// class of alpha.
inline constexpr const char* kSignConvention = "minus1-pow-alpha-star-plus-1";

struct TransformRequest {
  profiles::RadialProfile profile;
  int n = 3;
  double alpha = 1.0;
  Method method = Method::eq6;
  /// Skip the hypothesis check on the profile.
  bool force = false;

  void validate() const;
};

struct TransformResult {
  double r = 0.0;
  double value = 0.0;
  double err_est = 0.0;
  Method method = Method::eq6;
  /// Upper integration limit actually used (infinity when extrapolated).
  double truncation_A = 0.0;
  std::string sign_convention_id = kSignConvention;
  /// |eq6 - direct| where the automatic method cross-checked this radius.
  std::optional<double> cross_check;
};

/// fhat(r) = (2π)^(n/2) (-1)^(alpha*+1) / Gamma(alpha) r^(1-n/2)
///           ∫_0^∞ F(t) t^(alpha+1/2) Q(rt) dt.
TransformResult forward_eq6(const TransformRequest& req, double r);
/// The same on a grid; F is evaluated once on a shared mesh and the radii
/// are processed in parallel.
std::vector<TransformResult> forward_eq6_grid(const TransformRequest& req, const std::vector<double>& radii);
/// Serial reference for forward_eq6_grid.
std::vector<TransformResult> forward_eq6_grid_serial(const TransformRequest& req, const std::vector<double>& radii);

/// (2π)^(n/2) r^(1-n/2) ∫_0^∞ f0(t) t^(n/2) J_{n/2-1}(rt) dt. With an empty
/// schedule the improper tail is summed over Bessel half-periods with
/// acceleration; otherwise truncated integrals at the listed A are
/// extrapolated to A -> infinity.
TransformResult forward_direct(const profiles::RadialProfile& profile, int n, double r,
                               const std::vector<double>& A_schedule = {});
std::vector<TransformResult> forward_direct_grid(const profiles::RadialProfile& profile, int n,
                                                 const std::vector<double>& radii,
                                                 const std::vector<double>& A_schedule = {});

/// Dispatches on req.method. `automatic` evaluates eq6 everywhere and
/// cross-checks three radii against the direct integral.
std::vector<TransformResult> transform_grid(const TransformRequest& req, const std::vector<double>& radii);

struct InverseResult {
  double value = 0.0;
  double err_est = 0.0;
  /// (A, Bochner-Riesz mean at A).
  std::vector<std::pair<double, double>> means;
  bool diverged = false;
};

/// Recovers f0(r) from a radial transform by the means
/// (2π)^(-n) ∫_{|u|<=A} (1 - |u|^2/A^2)^((n-1)/2-alpha) fhat(u) e^{ix.u} du
/// at each A, extrapolated to A -> infinity.
InverseResult inverse_eq5(const std::function<double(double)>& fhat, int n, double alpha, double r,
                          const std::vector<double>& A_schedule);

/// Piecewise-Chebyshev table of fhat on (0, s_max], built from the eq6 grid
/// machinery; used for round trips.
std::function<double(double)> tabulate_transform(const TransformRequest& req, double s_max);

/// 2^exponent_base2 π^exponent_pi (-1)^sign_power.
struct LeadingConstant {
  double exponent_base2 = 0.0;
  double exponent_pi = 0.0;
  int sign = 1;

  double value() const;
};

/// Constant of the main asymptotic term for dimension n with the given
/// base-2 exponent (default (n+1)/2).
LeadingConstant theorem3_constant(int n, std::optional<double> exponent_base2 = std::nullopt);

struct AsymptoticResult {
  double main_term = 0.0;
  /// Monotone envelope of the remainder on [2, ∞).
  std::function<double(double)> remainder_envelope;
  /// Largest observed |fhat - main| / envelope on the calibration radii.
  double theta_bound = 0.0;
};

/// Asymptotics of fhat for f0 supported on [0, 1] with F = F_{(n-1)/2}
/// continuous and convex on [0, 1].
class Theorem3Model {
 public:
  Theorem3Model(const profiles::RadialProfile& profile, int n, std::optional<double> exponent_base2 = std::nullopt);

  double main_term(double r) const;
  /// Main term without the leading constant.
  double shape(double r) const;
  double envelope(double r) const;
  double variation() const { return variation_; }
  const LeadingConstant& constant() const { return constant_; }
  const fraccalc::FractionalDerivativeResult& F() const { return F_; }

 private:
  int n_;
  LeadingConstant constant_;
  fraccalc::FractionalDerivativeResult F_;
  std::vector<double> t_;      // grid on (0, 1)
  std::vector<double> w_;      // trapezoid weights
  std::vector<double> slope_;  // |F'| on the grid
  double slope_half_ = 0.0;    // |F'(1/2)|
  double variation_ = 0.0;
};

AsymptoticResult theorem3_asymptotic(const profiles::RadialProfile& profile, int n, double r);

struct Theorem3Calibration {
  std::vector<double> peaks;
  std::vector<double> fhat;
  std::vector<double> main_term;
  /// Best-fit base-2 exponent of the leading constant.
  double fitted_exponent = 0.0;
  /// rms relative residual at the peaks for the (n+1)/2 and (n+1)/3 exponents.
  double residual_half = 0.0;
  double residual_third = 0.0;
};

/// Compares eq6 with the main term at the radii where |cos(r - πn/2)| = 1
/// inside [r_lo, r_hi].
Theorem3Calibration calibrate_theorem3(const profiles::RadialProfile& profile, int n, double r_lo, double r_hi,
                                       int max_peaks = 64);

struct A2Result {
  std::complex<double> main_term;
  std::complex<double> exact;
  double remainder = 0.0;
  /// V_f / d + |f'(b)|.
  double budget = 0.0;
};

/// ∫_a^b f(t) e^{-irt} dt against (i/r){f(b)e^{-ibr} - f(a + d/|r|)e^{-iar}},
/// d = min(b - a, π), for f convex on [a, b] (b finite).
A2Result theoremA2_1d(const Evaluable& f, double a, double b, double r);

struct DecayReport {
  /// sup r^(n/2) |fhat|.
  double sup_scaled = 0.0;
  /// Log-log slope of the per-octave maxima of |fhat|.
  double envelope_slope = 0.0;
  bool bounded = true;
};

DecayReport decay_check(const std::vector<TransformResult>& results, int n);

/// ∫_a^b f(t) sin(r t + phase) dt on the uniform radius grid r0 + k dr,
/// k < count. f is sampled once on a composite rule graded towards a, b and
/// `graded`; the radius sweep uses the angle-addition recurrence.
std::vector<double> sine_transform_uniform(const std::function<double(double)>& f, double a, double b,
                                           const std::vector<double>& graded, double phase, double r0, double dr,
                                           int count);

}  // namespace radialft::transform
