#pragma once

// Radial profiles f0 of radial functions f(x) = f0(|x|): built-in analytic
// families, tabulated data, and the key=value profile grammar.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace radialft {

/// A function on the half-line together with what the fractional-calculus
/// routines need to integrate it: optional exact derivatives, the support end
/// and the algebraic order of vanishing there, and a decay length scale.
struct Evaluable {
  std::function<double(double)> f;
  /// k-th derivative for 1 <= k <= max_derivative; empty when unavailable.
  std::function<double(int, double)> derivative;
  int max_derivative = 0;
  std::optional<double> support_end;
  /// f ~ (support_end - t)^end_exponent just inside the support end.
  double end_exponent = 0.0;
  /// Length beyond which an unbounded profile has settled into its tail.
  double scale = 1.0;
  /// f ~ c t^-tail_power as t -> infinity, when known.
  std::optional<double> tail_power;
  /// Interior point where derivatives lose smoothness; finite-difference
  /// stencils stay on one side of it.
  std::optional<double> kink;

  Evaluable() = default;
  Evaluable(std::function<double(double)> fn) : f(std::move(fn)) {}  // NOLINT(implicit)
  double operator()(double t) const { return f(t); }
};

struct DerivativeValue {
  double value = 0.0;
  double err_est = 0.0;
  bool closed_form = true;
  /// Finite-difference noise exceeded 1e-6 of the value.
  bool precision_warning = false;
};

/// k-th derivative by Richardson-extrapolated central differences, staying
/// inside [lo, hi].
DerivativeValue numeric_derivative(const std::function<double(double)>& f, int k, double t, double h0,
                                   double lo = 0.0, double hi = 1e300);

/// Stencil bounds [lo, hi] around t for an Evaluable.
std::pair<double, double> stencil_bounds(const Evaluable& f, double t);

namespace profiles {

enum class Family { gaussian, exponential, bochner_riesz, example1, example2, remark3, belinskii, tabulated, custom };

std::string family_name(Family f);

class ProfileImpl;

class RadialProfile {
 public:
  /// e^(-t^2/2).
  static RadialProfile gaussian();
  /// e^(-t).
  static RadialProfile exponential();
  /// (1 - t^2)^delta on [0, 1].
  static RadialProfile bochner_riesz(double delta);
  /// (1 - t^a)^beta on [0, 1].
  static RadialProfile example1(double a, double beta);
  /// (1 - (1 - t^a)^beta_+) / t^r.
  static RadialProfile example2(double a, double beta, double r);
  /// sin(ln ln(e/t)) on [0, 1].
  static RadialProfile remark3();
  /// sin(ln ln(e/t)) / ln ln(e/t) on [0, 1].
  static RadialProfile belinskii();
  /// Monotone cubic through the knots, zero beyond the last knot.
  static RadialProfile tabulated(std::vector<std::pair<double, double>> knots, std::string source = {});
  static RadialProfile tabulated_file(const std::string& path);
  /// Ad-hoc profile from callables (not expressible in the grammar).
  static RadialProfile custom(std::string name, std::function<double(double)> f,
                              std::function<double(int, double)> derivative = {}, int max_derivative = 0,
                              std::optional<double> support_end = std::nullopt, double scale = 1.0);

  Family family() const;
  std::string name() const;
  std::vector<double> params() const;

  double eval(double t) const;
  /// f0(support_end - u), accurate for small u on compactly supported
  /// families.
  double eval_reflected(double u) const;
  bool has_closed_derivative(int k) const;
  /// k-th classical derivative; closed form when registered, otherwise
  /// finite differences.
  DerivativeValue derivative(int k, double t) const;

  std::optional<double> support_end() const;
  double end_exponent() const;
  /// f0 jumps to zero at the support end.
  bool jump_at_end() const;
  double decay_scale() const;
  /// f0(t) ~ c t^-power as t -> infinity (power-law tail), if any.
  std::optional<double> tail_power() const;
  /// Whether f0, ..., f0^(order) are locally absolutely continuous on
  /// (0, infinity); nullopt when it cannot be decided from the family.
  std::optional<bool> locally_absolutely_continuous(int order) const;

  /// Warnings about parameter ranges for which the integrability claims
  /// attached to the family do not apply in dimension n.
  std::vector<std::string> claim_warnings(int n) const;

  std::string render() const;
  Evaluable evaluable() const;

  bool operator==(const RadialProfile& other) const;

 private:
  explicit RadialProfile(std::shared_ptr<const ProfileImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const ProfileImpl> impl_;
};

/// Parses "family=<name> [alpha=..] [beta=..] [r=..] [delta=..] [file=..]";
/// tokens separated by whitespace, newlines or ';'.
RadialProfile parse_profile(const std::string& spec);

}  // namespace profiles
}  // namespace radialft
