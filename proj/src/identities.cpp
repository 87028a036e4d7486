#include <algorithm>
#include <cmath>
#include <numbers>

#include "radialft/error.hpp"
#include "radialft/specfun.hpp"

namespace radialft::specfun {

double aux_integral(double mu, double lambda, double r) {
  if (!(mu + lambda > -1.0)) throw DomainError("aux_integral: need mu + lambda > -1");
  if (!(lambda >= -1.0)) throw DomainError("aux_integral: Bessel order must be >= -1");
  if (!(r > 0.0)) throw DomainError("aux_integral: r must be positive");
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  spec.abs_tol = 1e-16;
  spec.strict = false;
  auto f = [=](double t) { return std::pow(t, mu) * bessel_j(lambda, r * t); };
  // Near 0 the integrand behaves like t^(mu+lambda) (t^(mu+1) for order -1).
  const double lead = lambda == -1.0 ? mu + 1.0 : mu + lambda;
  quad::EndpointHints hints;
  if (lead < 0.0) hints.left = lead;
  const int pieces = std::max(1, static_cast<int>(std::ceil(r / 4.0)));
  double sum = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double a = static_cast<double>(i) / pieces;
    const double b = static_cast<double>(i + 1) / pieces;
    sum += quad::integrate_adaptive(f, a, b, spec, i == 0 ? hints : quad::EndpointHints{}).value;
  }
  return sum;
}

std::pair<double, double> sw_identity_check(double beta, double mu, double r) {
  if (!(beta > -0.5) || !(mu > -1.0) || !(r > 0.0))
    throw DomainError("sw_identity_check: need beta > -1/2, mu > -1, r > 0");
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  spec.abs_tol = 1e-16;
  spec.strict = false;
  // (1-s^2)^mu = (1-s)^mu (1+s)^mu; the singular factor sits at s = 1.
  auto f = [=](double s) {
    return bessel_j(beta, r * s) * std::pow(s, beta + 1.0) * std::pow((1.0 - s) * (1.0 + s), mu);
  };
  quad::EndpointHints hints;
  if (mu < 0.0) hints.right = mu;
  const int pieces = std::max(2, static_cast<int>(std::ceil(r / 4.0)));
  double lhs = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double a = static_cast<double>(i) / pieces;
    const double b = static_cast<double>(i + 1) / pieces;
    lhs += quad::integrate_adaptive(f, a, b, spec, i + 1 == pieces ? hints : quad::EndpointHints{}).value;
  }
  const double rhs = std::pow(2.0, mu) * std::tgamma(mu + 1.0) * std::pow(r, -mu - 1.0) * bessel_j(beta + mu + 1.0, r);
  return {lhs, rhs};
}

DiscontinuousIntegral weber_schafheitlin(double mu, double nu, double a, double b, int max_oscillations) {
  if (!(nu > mu) || !(mu > -1.0)) throw DomainError("weber_schafheitlin: need nu > mu > -1");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("weber_schafheitlin: a and b must be positive");
  if (a == b) throw DomainError("weber_schafheitlin: the case a = b is singular");

  DiscontinuousIntegral out;
  out.closed_form = b > a ? std::pow(2.0, mu - nu + 1.0) * std::pow(a, mu) * std::pow(b, -nu) *
                                std::pow(b * b - a * a, nu - mu - 1.0) / std::tgamma(nu - mu)
                          : 0.0;

  // The product of the two Bessel factors beats at frequency |b - a|; panels
  // of half that period make the slow component alternate.
  auto f = [=](double t) { return bessel_j(mu, a * t) * bessel_j(nu, b * t) * std::pow(t, mu - nu + 1.0); };
  const double period = std::numbers::pi / std::abs(b - a);
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  spec.abs_tol = 1e-11;
  spec.max_oscillations = max_oscillations;
  quad::OscillatoryResult res =
      quad::integrate_panels_accelerated(f, [period](int k) { return k * period; }, spec);
  out.value = res.value;
  out.err_est = res.err_est;
  out.converged = res.converged;
  return out;
}

}  // namespace radialft::specfun
