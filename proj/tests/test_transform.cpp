#include <cmath>
#include <cstring>

#include "doctest.h"
#include "radialft/error.hpp"
#include "radialft/transform.hpp"

using namespace radialft;
using namespace radialft::transform;
using profiles::RadialProfile;

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(lo * std::pow(hi / lo, i / double(count - 1)));
  return g;
}

double gaussian_hat(int n, double r) { return std::pow(2 * M_PI, 0.5 * n) * std::exp(-0.5 * r * r); }

}  // namespace

TEST_CASE("eq6 agrees with the direct integral") {
  const auto radii = log_grid(0.5, 50.0, 20);
  for (int n = 2; n <= 5; ++n) {
    const std::vector<RadialProfile> profiles{RadialProfile::gaussian(), RadialProfile::exponential(),
                                              RadialProfile::example1(2.0, 0.5 * (n + 1) + 0.5)};
    for (const auto& p : profiles) {
      for (double alpha : {0.5 * (n - 1), 0.25 * (n - 1)}) {
        TransformRequest req{p, n, alpha};
        const auto eq6 = forward_eq6_grid(req, radii);
        const auto direct = forward_direct_grid(p, n, radii);
        for (std::size_t i = 0; i < radii.size(); ++i) {
          INFO(p.render(), " n=", n, " alpha=", alpha, " r=", radii[i]);
          CHECK(std::abs(eq6[i].value - direct[i].value) <= 1e-6 * (1.0 + std::abs(direct[i].value)));
          CHECK(eq6[i].err_est >= 0.0);
          CHECK(std::isfinite(eq6[i].value));
        }
      }
    }
  }
}

TEST_CASE("eq6 does not depend on the admissible order") {
  const auto radii = log_grid(0.5, 30.0, 8);
  const auto p = RadialProfile::example1(2.0, 3.0);
  const int n = 4;
  const auto ref = forward_eq6_grid({p, n, 1.5}, radii);
  for (double alpha : {0.3, 0.75, 1.0, 1.25}) {
    const auto other = forward_eq6_grid({p, n, alpha}, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) CHECK(std::abs(other[i].value - ref[i].value) < 1e-5);
  }
}

TEST_CASE("gaussian closed form") {
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    const auto v = forward_eq6({RadialProfile::gaussian(), 3, 1.0}, r);
    CHECK(std::abs(v.value - gaussian_hat(3, r)) < 1e-9 * gaussian_hat(3, r));
    CHECK(v.sign_convention_id == std::string(kSignConvention));
  }
}

TEST_CASE("residual against the direct integral shrinks with r") {
  // The truncated eq6 tail converges uniformly away from the origin: the
  // largest residual over [r, 50] does not grow as r increases.
  const auto radii = log_grid(1.0, 50.0, 16);
  const auto p = RadialProfile::example1(2.0, 3.0);
  const auto eq6 = forward_eq6_grid({p, 3, 1.0}, radii);
  const auto direct = forward_direct_grid(p, 3, radii);
  double tail_max = 0.0;
  std::vector<double> suffix(radii.size());
  for (std::size_t i = radii.size(); i-- > 0;) {
    tail_max = std::max(tail_max, std::abs(eq6[i].value - direct[i].value));
    suffix[i] = tail_max;
  }
  for (std::size_t i = 0; i + 1 < suffix.size(); ++i) CHECK(suffix[i + 1] <= suffix[i]);
  CHECK(suffix.front() < 1e-8);
}

TEST_CASE("parallel grid matches the serial reference bitwise") {
  const auto radii = log_grid(0.5, 40.0, 24);
  const TransformRequest req{RadialProfile::example1(2.0, 2.5), 3, 0.75};
  const auto par = forward_eq6_grid(req, radii);
  const auto ser = forward_eq6_grid_serial(req, radii);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(std::memcmp(&par[i].value, &ser[i].value, sizeof(double)) == 0);
    CHECK(std::memcmp(&par[i].err_est, &ser[i].err_est, sizeof(double)) == 0);
  }
}

TEST_CASE("automatic method cross-checks three radii") {
  const auto radii = log_grid(0.5, 20.0, 9);
  const auto res = transform_grid({RadialProfile::exponential(), 3, 1.0, Method::automatic}, radii);
  int checked = 0;
  for (const auto& tr : res) {
    if (!tr.cross_check) continue;
    ++checked;
    CHECK(*tr.cross_check <= 10.0 * tr.err_est + 1e-14);
  }
  CHECK(checked == 3);
}

TEST_CASE("hypotheses and domain") {
  CHECK_THROWS_AS(forward_eq6({RadialProfile::gaussian(), 3, 1.0}, 0.0), DomainError);
  CHECK_THROWS_AS(forward_eq6({RadialProfile::gaussian(), 3, 1.5}, 1.0), DomainError);
  CHECK_THROWS_AS(forward_eq6({RadialProfile::belinskii(), 3, 1.0}, 1.0), ConditionViolation);
  TransformRequest forced{RadialProfile::belinskii(), 3, 1.0};
  forced.force = true;
  CHECK(std::isfinite(forward_eq6(forced, 5.0).value));
  CHECK(parse_method("auto") == Method::automatic);
  CHECK(method_name(Method::direct) == "direct");
  CHECK_THROWS_AS(parse_method("fft"), ParseError);
}

TEST_CASE("bochner-riesz means invert the gaussian") {
  const int n = 3;
  auto fhat = [n](double s) { return gaussian_hat(n, s); };
  for (double r : {0.2, 0.6, 1.0}) {
    const auto inv = inverse_eq5(fhat, n, 1.0, r, {20.0, 40.0, 80.0, 160.0});
    CHECK(std::abs(inv.value - std::exp(-0.5 * r * r)) < 1e-6);
    CHECK(inv.means.size() == 4);
  }
}

TEST_CASE("leading constant") {
  const auto c = theorem3_constant(3);
  CHECK(c.exponent_base2 == 2.0);
  CHECK(std::abs(c.value() + 4 * M_PI) < 1e-13);
  CHECK(theorem3_constant(2).value() < 0.0);
  CHECK(theorem3_constant(4).value() > 0.0);
}

TEST_CASE("leading asymptotics of a convex profile") {
  const auto p = RadialProfile::example1(1.0, 1.05);
  const auto res = theorem3_asymptotic(p, 3, 200.0);
  CHECK(res.theta_bound < 10.0);
  CHECK(res.remainder_envelope(10.0) >= res.remainder_envelope(100.0));
  CHECK_THROWS_AS(theorem3_asymptotic(RadialProfile::gaussian(), 3, 200.0), ConditionViolation);
}

TEST_CASE("one-dimensional leading term for convex functions") {
  Evaluable f([](double t) { return (1.0 - t) * (1.0 - t) + 0.5; });
  f.derivative = [](int, double t) { return -2.0 * (1.0 - t); };
  f.max_derivative = 1;
  for (double r : {2.0, 10.0, 100.0, 1000.0}) {
    const auto res = theoremA2_1d(f, 0.0, 1.0, r);
    CHECK(res.remainder <= 4.0 * res.budget / (r * r) + 1e-12);
  }
  Evaluable concave([](double t) { return -t * t; });
  CHECK_THROWS_AS(theoremA2_1d(concave, 0.0, 1.0, 5.0), ConditionViolation);
}

TEST_CASE("decay of scaled transforms") {
  const auto radii = log_grid(1.0, 200.0, 60);
  const auto smooth = forward_eq6_grid({RadialProfile::example1(2.0, 2.0), 3, 1.0}, radii);
  CHECK(decay_check(smooth, 3).envelope_slope <= -1.5);
  TransformRequest req{RadialProfile::remark3(), 3, 1.0};
  req.force = true;
  CHECK(decay_check(forward_eq6_grid(req, radii), 3).bounded);
}

TEST_CASE("uniform sine transform") {
  const auto v = sine_transform_uniform([](double) { return 1.0; }, 0.0, 1.0, {}, 0.0, 0.5, 0.25, 400);
  for (int k = 0; k < 400; ++k) {
    const double r = 0.5 + 0.25 * k;
    CHECK(std::abs(v[static_cast<std::size_t>(k)] - (1.0 - std::cos(r)) / r) < 1e-12);
  }
}
