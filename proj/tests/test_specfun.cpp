#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "radialft/error.hpp"
#include "radialft/specfun.hpp"

using namespace radialft;
using namespace radialft::specfun;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("bessel_j agrees with an independent implementation") {
  for (double nu : {-0.5, 0.0, 0.5, 1.0, 1.5, 2.3, 5.0, 12.5}) {
    for (double x : {1e-3, 0.1, 1.0, 7.5, 11.9, 12.1, 25.0, 60.0, 300.0, 5000.0}) {
      const double ref = boost::math::cyl_bessel_j(nu, x);
      const double got = bessel_j(nu, x);
      // absolute scale of J near its zeros
      CHECK(std::abs(got - ref) < 1e-12 * std::max(1.0, std::abs(ref)) + 1e-13 / std::sqrt(std::max(1.0, x)));
    }
  }
}

TEST_CASE("differentiation identity for t^nu J_nu") {
  const double h = 1e-5;
  for (double nu : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    for (double t = 0.5; t <= 50.0; t += 2.45) {
      auto g = [nu](double s) { return std::pow(s, nu) * bessel_j(nu, s); };
      const double d = (g(t + h) - g(t - h)) / (2 * h);
      CHECK(std::abs(d - std::pow(t, nu) * bessel_j(nu - 1, t)) < 1e-6 * std::max(1.0, std::pow(t, nu)));
    }
  }
}

TEST_CASE("large-argument remainder decays like t^-5/2") {
  for (double nu : {1.0, 2.0}) {
  std::vector<double> t, err;
  for (double s = 20.0; s <= 2000.0; s *= 1.05) {
    // envelope of the remainder: sample the max over one period
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
      const double x = s + k * 2 * M_PI / 16;
      const double w = x - M_PI * nu / 2 - M_PI / 4;
      const double two_term = std::sqrt(2 / (M_PI * x)) * (std::cos(w) - (4 * nu * nu - 1) / (8 * x) * std::sin(w));
      worst = std::max(worst, std::abs(bessel_j(nu, x) - two_term));
    }
    t.push_back(s);
    err.push_back(worst);
  }
  CHECK(std::abs(log_slope(t, err) + 2.5) < 0.15);
  }
}

TEST_CASE("small-argument behaviour J_nu(t) ~ t^nu") {
  for (double nu : {0.5, 1.0, 2.5}) {
    std::vector<double> t, v;
    for (double s = 1e-4; s <= 0.1; s *= 1.3) {
      t.push_back(s);
      v.push_back(bessel_j(nu, s));
    }
    CHECK(std::abs(log_slope(t, v) - nu) < 0.05);
  }
}

TEST_CASE("kernel parameters are validated") {
  CHECK_THROWS_AS((KernelParams{0.0, 3}).validate(), DomainError);
  CHECK_THROWS_AS((KernelParams{1.5, 3}).validate(), DomainError);
  CHECK_THROWS_AS((KernelParams{0.5, 1}).validate(), DomainError);
  CHECK_NOTHROW((KernelParams{1.0, 3}).validate());
  CHECK((KernelParams{1.0, 3}).is_default_order());
  CHECK_FALSE((KernelParams{0.5, 3}).is_default_order());
}

TEST_CASE("kernel Q matches reference quadrature") {
  for (KernelParams p : {KernelParams{1.0, 3}, KernelParams{0.5, 3}, KernelParams{0.3, 2}, KernelParams{1.5, 4}}) {
    for (double t : {0.1, 0.7, 2.0, 5.5, 11.0, 20.0}) {
      const double ref = bessel_moment_quadrature(p.alpha, p.n / 2.0, p.n / 2.0 - 1, t);
      CHECK(std::abs(kernel_Q(p, t) - ref) < 1e-8);
      const double refq = bessel_moment_quadrature(p.alpha, p.n / 2.0 - 1, p.n / 2.0, t);
      CHECK(std::abs(kernel_q(p, t) - refq) < 1e-8);
    }
  }
}

TEST_CASE("kernel tables agree with direct evaluation across the crossover") {
  const KernelParams p{1.0, 3};
  const auto& Q = KernelTable::get(p, KernelTable::Kind::Q);
  for (double t : {0.01, 1.0, 10.0, 30.0, Q.crossover() * 0.99, Q.crossover() * 1.01, 200.0, 1000.0}) {
    const double ref = bessel_moment_quadrature(p.alpha, 1.5, 0.5, t);
    CHECK(std::abs(Q(t) - ref) < 1e-8);
  }
}

TEST_CASE("asymptotic structure of q") {
  const KernelParams p{0.75, 3};
  const auto a = kernel_asymptotics(p);
  CHECK(rel_diff(a.main_coeff, std::tgamma(0.75)) < 1e-15);
  CHECK(a.remainder_exponent == -0.75 - 1.5);
  const double r0 = kernel_crossover(p);
  CHECK_THROWS(kernel_q_asymptotic(p, 0.5 * r0));
  for (double r : {r0, 2 * r0, 10 * r0}) {
    const auto v = kernel_q_asymptotic(p, r);
    CHECK(std::abs(v.value - bessel_moment_quadrature(p.alpha, 0.5, 1.5, r)) <= v.remainder_bound);
  }
}

TEST_CASE("zeta calibration matches the closed form") {
  for (int n : {2, 3, 4}) {
    const KernelParams p{(n - 1) / 2.0, n};
    const auto cal = calibrate_zeta(p);
    CHECK(rel_diff(cal.zeta, zeta_closed_form(n)) < 1e-4);
  }
  CHECK(rel_diff(zeta_closed_form(3), std::sqrt(2.0) * std::sqrt(M_PI) / 2) < 1e-15);
}

TEST_CASE("aux integral recursion") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu_d(-0.4, 3.0), lam_d(-0.5, 3.0), r_d(0.1, 100.0);
  for (int i = 0; i < 200; ++i) {
    const double mu = mu_d(rng), lam = lam_d(rng), r = r_d(rng);
    if (mu + lam <= -0.9) continue;
    const double lhs = aux_integral(mu, lam, r);
    const double rhs = bessel_j(lam + 1, r) / r + (lam + 1 - mu) / r * aux_integral(mu - 1, lam + 1, r);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
  CHECK_THROWS_AS(aux_integral(-1.0, -0.5, 1.0), DomainError);
}

TEST_CASE("sonine-type identity") {
  for (double r : {0.5, 3.0, 17.0}) {
    auto [lhs, rhs] = sw_identity_check(0.5, 1.25, r);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("weber-schafheitlin discontinuous integral") {
  auto below = weber_schafheitlin(0.0, 2.0, 2.0, 1.0);
  CHECK(std::abs(below.value) < 1e-4);
  auto above = weber_schafheitlin(0.0, 2.0, 1.0, 2.0);
  CHECK(std::abs(above.value - above.closed_form) < 1e-4);
  CHECK(std::abs(above.closed_form - 0.5 * 0.25 * 3.0) < 1e-14);
  CHECK_THROWS_AS(weber_schafheitlin(0.0, 2.0, 1.0, 1.0), DomainError);
}
