#pragma once

// Quadrature engine: adaptive Gauss-Kronrod panels with algebraic endpoint
// substitutions, improper oscillatory integrals accelerated by the epsilon
// algorithm, and extrapolation of truncated integrals to their A -> infinity
// limit.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace radialft::quad {

using Integrand = std::function<double(double)>;

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_depth = 24;
  int max_oscillations = 4096;
  /// Throw ToleranceError when the tolerance is not met; otherwise return
  /// the best estimate with `converged == false`.
  bool strict = true;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double err_est = 0.0;
  int evaluations = 0;
  bool converged = true;
};

/// Exponents of algebraic endpoint behaviour: f(x) ~ (x - a)^left near a and
/// f(x) ~ (b - x)^right near b. Only negative exponents (> -1) trigger a change
/// of variables; the substitution x = a + (b - a) u^(1/(left+1)) turns the
/// singular factor into a constant.
struct EndpointHints {
  std::optional<double> left;
  std::optional<double> right;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature on a finite interval.
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const QuadratureSpec& spec = {},
                              const EndpointHints& hints = {});

/// Fixed n-point Gauss-Legendre rule on [-1, 1] (nodes, weights).
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b,
/// a, b > -1 (nodes, weights).
std::pair<std::vector<double>, std::vector<double>> gauss_jacobi(int n, double a, double b);

/// Nodes and weights of a composite Gauss-Legendre rule.
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite `order`-point Gauss-Legendre rule on [a, b] with panels no wider
/// than max_width, refined geometrically (ratio 1/2, `grading_levels` steps)
/// on both sides of each point in `graded_points`.
CompositeRule composite_rule(double a, double b, double max_width, const std::vector<double>& graded_points,
                             int order = 20, int grading_levels = 60);

/// An oscillating factor with computable sign changes.
class OscillatorySplit {
 public:
  enum class Kind { bessel, trig };

  /// J_order(scale * t).
  static OscillatorySplit bessel(double order, double scale);
  /// sin(frequency * t + phase).
  static OscillatorySplit trig(double frequency, double phase);

  Kind kind() const { return kind_; }
  double operator()(double t) const;
  /// Increasing sign changes strictly greater than `a`.
  std::vector<double> zeros_after(double a, std::size_t count) const;

 private:
  OscillatorySplit(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}
  Kind kind_;
  double p1_;  // order or frequency
  double p2_;  // scale or phase
};

struct OscillatoryResult {
  double value = 0.0;
  double err_est = 0.0;
  int panels = 0;
  bool converged = false;
  /// Panel contributions stopped decreasing: the improper integral diverges.
  bool diverged = false;
};

/// ∫_a^∞ envelope(t) * osc(t) dt as a sum over inter-zero panels, with the
/// partial sums accelerated by the epsilon algorithm.
OscillatoryResult integrate_oscillatory(const Integrand& envelope,
                                        const OscillatorySplit& osc, double a,
                                        const QuadratureSpec& spec = {});

/// Same machinery for a full integrand whose panel boundaries are given by
/// `breakpoint(k)`, k = 0, 1, 2, ... (increasing, breakpoint(0) = start).
OscillatoryResult integrate_panels_accelerated(
    const Integrand& f, const std::function<double(int)>& breakpoint,
    const QuadratureSpec& spec = {});

/// Epsilon-algorithm limit of a sequence of partial sums. Returns (limit,
/// error estimate).
std::pair<double, double> epsilon_limit(const std::vector<double>& partial_sums);

struct LimitResult {
  double limit = 0.0;
  double err_est = 0.0;
  bool diverged = false;
};

/// Richardson extrapolation to A -> infinity of samples value(A) assumed to
/// behave like L + c1/A + c2/A^2 + ... . Needs at least 4 samples.
LimitResult limit_extrapolate(std::vector<std::pair<double, double>> samples);

/// Piecewise Chebyshev interpolant on [a, b] with equal panels.
class ChebyshevTable {
 public:
  ChebyshevTable() = default;
  /// Builds the table from `f` sampled at Chebyshev-Gauss nodes; the samples
  /// are taken in parallel, so `f` must be safe to call concurrently.
  ChebyshevTable(const Integrand& f, double a, double b, int panels, int degree);

  double operator()(double x) const;
  double lower() const { return a_; }
  double upper() const { return b_; }
  bool empty() const { return coeffs_.empty(); }

 private:
  double a_ = 0.0;
  double b_ = 0.0;
  double width_ = 1.0;
  int panels_ = 0;
  int degree_ = 0;
  std::vector<double> coeffs_;  // panels_ * (degree_ + 1)
};

}  // namespace radialft::quad
