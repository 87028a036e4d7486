#pragma once

// Fractional calculus on the half-line: Weyl integrals and derivatives,
// Riemann-Liouville integrals, the weighted derivative F of a profile, and
// variation / continuity measurements of the result.

#include <functional>
#include <string>

#include "radialft/profiles.hpp"

namespace radialft::fraccalc {

struct FractionalOrder {
  double alpha = 1.0;
  /// Greatest integer strictly below alpha.
  int alpha_star = 0;
  int floor_alpha = 1;

  static FractionalOrder of(double alpha);
  bool is_integer() const { return alpha == floor_alpha; }
  /// Fractional part alpha - floor(alpha).
  double frac() const { return alpha - floor_alpha; }
};

enum class Provenance { closed_form, weyl_numeric };

std::string provenance_name(Provenance p);

/// t -> t^((n-1)/2) f0^(alpha)(t).
struct FractionalDerivativeResult {
  std::function<double(double)> F;
  Provenance provenance = Provenance::closed_form;
  FractionalOrder alpha;
  int n = 3;

  double operator()(double t) const { return F(t); }
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct VariationEstimate {
  double total_variation = 0.0;
  /// Smallest grid spacing used.
  double grid_resolution = 0.0;
  bool converged = false;
};

/// (1/Gamma(alpha)) ∫_t^∞ f(r) (r - t)^(alpha-1) dr.
double weyl_integral(const Evaluable& f, double alpha, double t, double rel_tol = 1e-11);

/// f^(alpha)(t): the classical derivative for integer alpha, otherwise the
/// p-th derivative of d/dt W_{1-gamma}(f) with alpha = p + gamma.
DerivativeValue weyl_derivative_detail(const Evaluable& f, const FractionalOrder& order, double t);
double weyl_derivative(const Evaluable& f, const FractionalOrder& order, double t);

/// (1/Gamma(alpha)) ∫_0^t f(r) (t - r)^(alpha-1) dr.
double riemann_liouville(const Evaluable& f, double alpha, double t, double rel_tol = 1e-11);

/// Recovers f^(p)(t), 0 <= p <= floor(alpha), from f^(alpha) by a Weyl
/// integral of order alpha - p.
double fractional_parts_formula(const Evaluable& f, const FractionalOrder& order, int p, double t);

/// F for a profile in dimension n. Uses the closed-form derivative when alpha
/// is an integer and the family has one, unless `force_numeric` is set.
FractionalDerivativeResult build_F(const profiles::RadialProfile& profile, const FractionalOrder& order, int n,
                                   bool force_numeric = false);

/// Variation of F on the closed interval by adaptive bisection (depth 24
/// beyond the initial grid). Grids are geometric when lo > 0 and hi/lo > 1e3.
VariationEstimate total_variation(const std::function<double(double)>& F, Interval domain,
                                  double rel_tol = 1e-4, int initial_points = 256);

/// sup |F(t+h) - F(t)| over 0 < h <= delta on a uniform probe grid.
double modulus_of_continuity(const std::function<double(double)>& F, double delta, Interval domain,
                             int grid_points = 8193);

}  // namespace radialft::fraccalc
