#include <cmath>
#include <numbers>

#include "doctest.h"
#include "radialft/error.hpp"
#include "radialft/quad.hpp"

using namespace radialft;
using namespace radialft::quad;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1") {
  for (int n : {4, 12, 20}) {
    auto [x, w] = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(s - exact) < 1e-14);
    }
  }
}

TEST_CASE("gauss-jacobi integrates weighted monomials") {
  // ∫ (1-x)^a (1+x)^b dx = 2^(a+b+1) B(a+1, b+1)
  const double a = -0.5, b = 0.3;
  auto [x, w] = gauss_jacobi(16, a, b);
  double s = 0.0;
  for (double wi : w) s += wi;
  const double exact = std::pow(2.0, a + b + 1) * std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 2);
  CHECK(std::abs(s - exact) < 1e-13);
}

TEST_CASE("composite rule is exact on panels") {
  auto rule = composite_rule(0.0, 3.0, 0.5, {0.0, 1.5}, 20, 10);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 7);
  CHECK(std::abs(s - std::pow(3.0, 8) / 8.0) < 1e-10);
}

TEST_CASE("adaptive quadrature with endpoint singularity") {
  QuadratureSpec spec;
  EndpointHints hints;
  hints.left = -0.5;
  auto res = integrate_adaptive([](double x) { return std::cos(x) / std::sqrt(x); }, 0.0, 1.0, spec, hints);
  CHECK(res.converged);
  // ∫_0^1 cos(x)/sqrt(x) = sqrt(2π) C(sqrt(2/π)) computed by series
  double series = 0.0, term = 2.0;
  for (int k = 0; k < 30; ++k) {
    series += term / (4 * k + 1);
    term *= -1.0 / ((2 * k + 1) * (2 * k + 2));
  }
  CHECK(std::abs(res.value - series) < 1e-12);
  CHECK(res.err_est >= 0.0);
}

TEST_CASE("spec validation") {
  QuadratureSpec spec;
  spec.rel_tol = 0.0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("strict spec raises tolerance errors") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-15;
  spec.abs_tol = 1e-300;
  spec.max_depth = 2;
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, spec),
                  ToleranceError);
  spec.strict = false;
  auto res = integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, spec);
  CHECK_FALSE(res.converged);
}

TEST_CASE("oscillatory integrals reproduce classical values") {
  // ∫_0^∞ sin t / t dt = π/2
  auto osc = OscillatorySplit::trig(1.0, 0.0);
  for (int budget : {2048, 4096, 8192}) {
    QuadratureSpec spec;
    spec.max_oscillations = budget;
    auto res = integrate_oscillatory([](double t) { return t == 0.0 ? 1.0 : 1.0 / t; }, osc, 0.0, spec);
    CHECK(res.converged);
    CHECK(std::abs(res.value - std::numbers::pi / 2) < 1e-8);
  }
  // ∫_0^∞ J_0(t) dt = 1
  auto j0 = OscillatorySplit::bessel(0.0, 1.0);
  auto res = integrate_oscillatory([](double) { return 1.0; }, j0, 0.0);
  CHECK(std::abs(res.value - 1.0) < 1e-8);
}

TEST_CASE("bessel zeros bracket single sign changes") {
  auto osc = OscillatorySplit::bessel(1.5, 2.0);
  auto z = osc.zeros_after(0.0, 40);
  REQUIRE(z.size() == 40);
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    CHECK(z[i] < z[i + 1]);
    const double mid = 0.5 * (z[i] + z[i + 1]);
    const double left = osc(z[i] + 1e-3 * (z[i + 1] - z[i]));
    const double right = osc(z[i + 1] - 1e-3 * (z[i + 1] - z[i]));
    CHECK(left * right > 0.0);
    CHECK(left * osc(mid) > 0.0);
  }
}

TEST_CASE("divergent envelopes are flagged") {
  auto osc = OscillatorySplit::trig(1.0, 0.0);
  QuadratureSpec spec;
  spec.strict = false;
  auto res = integrate_oscillatory([](double t) { return t; }, osc, 0.0, spec);
  CHECK(res.diverged);
}

TEST_CASE("epsilon algorithm accelerates an alternating series") {
  std::vector<double> sums;
  double s = 0.0;
  for (int k = 0; k < 20; ++k) {
    s += (k % 2 ? -1.0 : 1.0) / (k + 1);
    sums.push_back(s);
  }
  auto [lim, err] = epsilon_limit(sums);
  CHECK(std::abs(lim - std::log(2.0)) < 1e-10);
}

TEST_CASE("richardson limit of 1/A expansions") {
  std::vector<std::pair<double, double>> samples;
  for (double A : {10.0, 20.0, 40.0, 80.0, 160.0}) samples.emplace_back(A, 2.0 + 3.0 / A - 5.0 / (A * A));
  auto res = limit_extrapolate(samples);
  CHECK(std::abs(res.limit - 2.0) < 1e-10);
  CHECK_FALSE(res.diverged);
  CHECK_THROWS(limit_extrapolate({{1.0, 1.0}, {2.0, 1.0}}));
}

TEST_CASE("chebyshev table interpolates smooth functions") {
  ChebyshevTable table([](double x) { return std::exp(-x) * std::sin(3 * x); }, 0.0, 5.0, 10, 16);
  for (double x = 0.0; x <= 5.0; x += 0.137) CHECK(std::abs(table(x) - std::exp(-x) * std::sin(3 * x)) < 1e-12);
}
