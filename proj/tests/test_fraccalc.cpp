#include <cmath>

#include "doctest.h"
#include "radialft/error.hpp"
#include "radialft/fraccalc.hpp"

using namespace radialft;
using namespace radialft::fraccalc;

namespace {

Evaluable exp_decay() {
  Evaluable e([](double t) { return std::exp(-t); });
  e.derivative = [](int k, double t) { return (k % 2 ? -1.0 : 1.0) * std::exp(-t); };
  e.max_derivative = 8;
  return e;
}

Evaluable power_law(double p) {
  Evaluable e([p](double t) { return std::pow(t, -p); });
  e.derivative = [p](int k, double t) {
    double c = 1.0;
    for (int j = 0; j < k; ++j) c *= -(p + j);
    return c * std::pow(t, -p - k);
  };
  e.max_derivative = 8;
  e.tail_power = p;
  return e;
}

double sign_of(const FractionalOrder& o) { return (o.alpha_star + 1) % 2 ? -1.0 : 1.0; }

}  // namespace

TEST_CASE("fractional order bookkeeping") {
  auto a = FractionalOrder::of(1.0);
  CHECK(a.alpha_star == 0);
  CHECK(a.floor_alpha == 1);
  CHECK(a.is_integer());
  auto b = FractionalOrder::of(1.5);
  CHECK(b.alpha_star == 1);
  CHECK(b.floor_alpha == 1);
  CHECK(b.frac() == 0.5);
  auto c = FractionalOrder::of(0.3);
  CHECK(c.alpha_star == 0);
  CHECK(c.floor_alpha == 0);
  CHECK_THROWS_AS(FractionalOrder::of(0.0), DomainError);
}

TEST_CASE("weyl integrals of exponentials and powers") {
  for (double a : {0.25, 0.5, 1.0, 1.7}) {
    CHECK(std::abs(weyl_integral(exp_decay(), a, 0.7) - std::exp(-0.7)) < 1e-10);
    const double p = 3.0;
    const double exact = std::tgamma(p - a) / std::tgamma(p) * std::pow(2.0, a - p);
    CHECK(std::abs(weyl_integral(power_law(p), a, 2.0) - exact) < 1e-9 * exact);
  }
}

TEST_CASE("weyl integrals compose") {
  for (double a : {0.25, 0.5, 1.0}) {
    for (double b : {0.25, 0.5, 1.0}) {
      for (const auto& f : {exp_decay(), power_law(3.5)}) {
        Evaluable inner([f, b](double s) { return weyl_integral(f, b, s, 1e-12); });
        inner.scale = f.scale;
        if (f.tail_power) inner.tail_power = *f.tail_power - b;
        const double lhs = weyl_integral(inner, a, 1.3, 1e-10);
        const double rhs = weyl_integral(f, a + b, 1.3, 1e-12);
        CHECK(std::abs(lhs - rhs) < 1e-7 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("weyl derivative of an integral recovers the function") {
  for (double a : {0.5, 1.0, 1.5, 2.25}) {
    const auto order = FractionalOrder::of(a);
    const auto f = power_law(4.0);
    Evaluable w([f, a](double s) { return weyl_integral(f, a, s, 1e-13); });
    const double p = 4.0 - a;
    w.tail_power = p;
    w.derivative = [p, a](int k, double s) {
      double c = std::tgamma(p) / std::tgamma(4.0);
      for (int j = 0; j < k; ++j) c *= -(p + j);
      return c * std::pow(s, -p - k);
    };
    w.max_derivative = 8;
    for (double t : {0.8, 1.5, 3.0}) {
      const double got = weyl_derivative(w, order, t);
      CHECK(std::abs(got - sign_of(order) * f(t)) < 1e-6 * std::abs(f(t)));
    }
    const double e = weyl_derivative(exp_decay(), order, 0.9);
    CHECK(std::abs(e - sign_of(order) * std::exp(-0.9)) < 1e-9);
  }
}

TEST_CASE("riemann-liouville integral of monomials") {
  Evaluable sq([](double t) { return t * t; });
  for (double a : {0.5, 1.0, 2.5}) {
    const double exact = 2.0 / std::tgamma(3.0 + a) * std::pow(1.7, 2.0 + a);
    CHECK(std::abs(riemann_liouville(sq, a, 1.7) - exact) < 1e-10 * exact);
  }
}

TEST_CASE("classical derivatives from the fractional one") {
  const auto order = FractionalOrder::of(1.5);
  CHECK(std::abs(fractional_parts_formula(exp_decay(), order, 0, 0.5) - std::exp(-0.5)) < 1e-8);
  CHECK(std::abs(fractional_parts_formula(exp_decay(), order, 1, 0.5) + std::exp(-0.5)) < 1e-8);
}

TEST_CASE("closed and numeric F agree") {
  using profiles::RadialProfile;
  for (const auto& p : {RadialProfile::gaussian(), RadialProfile::exponential(), RadialProfile::example1(2.0, 2.0),
                        RadialProfile::bochner_riesz(2.5), RadialProfile::example2(3.0, 2.0, 2.0)}) {
    const auto order = FractionalOrder::of(1.0);
    auto closed = build_F(p, order, 3);
    auto numeric = build_F(p, order, 3, true);
    CHECK(closed.provenance == Provenance::closed_form);
    CHECK(numeric.provenance == Provenance::weyl_numeric);
    const double hi = p.support_end().value_or(4.0);
    for (int i = 1; i <= 50; ++i) {
      const double t = hi * i / 51.0;
      INFO(p.render(), " t=", t);
      CHECK(std::abs(closed(t) - numeric(t)) < 1e-6 * std::max(1.0, std::abs(closed(t))));
    }
  }
}

TEST_CASE("fractional F of the exponential") {
  const auto p = profiles::RadialProfile::exponential();
  auto F = build_F(p, FractionalOrder::of(0.5), 3);
  CHECK(std::abs(F(2.0) + 2.0 * std::exp(-2.0)) < 1e-9);
}

TEST_CASE("total variation") {
  auto s = [](double t) { return std::sin(t); };
  const auto whole = total_variation(s, {0.0, 2 * M_PI});
  CHECK(whole.converged);
  CHECK(std::abs(whole.total_variation - 4.0) < 1e-8);
  const auto left = total_variation(s, {0.0, 2.0});
  const auto right = total_variation(s, {2.0, 2 * M_PI});
  CHECK(left.total_variation + right.total_variation <= whole.total_variation + 1e-8);
  const auto fine = total_variation(s, {0.0, 2 * M_PI}, 1e-4, 2048);
  CHECK(std::abs(fine.total_variation - whole.total_variation) < 1e-8);
  // sin(1/t) near 0 has infinite variation
  const auto wild = total_variation([](double t) { return std::sin(1.0 / t); }, {1e-6, 1.0});
  CHECK(wild.total_variation > 1e4);
}

TEST_CASE("modulus of continuity") {
  auto f = [](double t) { return std::sqrt(t); };
  double prev = 0.0;
  for (double d : {1e-3, 1e-2, 0.05, 0.1, 0.3}) {
    const double w = modulus_of_continuity(f, d, {0.0, 1.0});
    CHECK(w >= prev);
    CHECK(std::abs(w - std::sqrt(d)) < 1e-3);
    prev = w;
  }
  const double w1 = modulus_of_continuity(f, 0.02, {0.0, 1.0});
  const double w2 = modulus_of_continuity(f, 0.05, {0.0, 1.0});
  const double w12 = modulus_of_continuity(f, 0.07, {0.0, 1.0});
  CHECK(w12 <= w1 + w2 + 1e-9);
}
