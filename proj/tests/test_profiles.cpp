#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "radialft/error.hpp"
#include "radialft/profiles.hpp"

using namespace radialft;
using namespace radialft::profiles;

namespace {

std::vector<RadialProfile> builtins() {
  return {RadialProfile::gaussian(),          RadialProfile::exponential(),
          RadialProfile::bochner_riesz(1.5),  RadialProfile::example1(2.0, 2.0),
          RadialProfile::example1(1.5, 2.5),  RadialProfile::example2(3.0, 2.0, 2.0),
          RadialProfile::remark3(),           RadialProfile::belinskii()};
}

}  // namespace

TEST_CASE("render and parse round trip") {
  for (const auto& p : builtins()) {
    const auto q = parse_profile(p.render());
    CHECK(q == p);
    CHECK(q.family() == p.family());
    CHECK(q.params() == p.params());
  }
}

TEST_CASE("profile grammar") {
  CHECK(parse_profile("family=example1;alpha=2;beta=2") == RadialProfile::example1(2, 2));
  CHECK(parse_profile("family=example1\nalpha=2  beta=2") == RadialProfile::example1(2, 2));
  CHECK_THROWS_AS(parse_profile("alpha=2"), ParseError);
  CHECK_THROWS_AS(parse_profile("family=nope"), ParseError);
  CHECK_THROWS_AS(parse_profile("family=example1 alpha=2"), ParseError);
  CHECK_THROWS_AS(parse_profile("family=example1 alpha=x beta=2"), ParseError);
  CHECK_THROWS_AS(parse_profile("family=gaussian beta=2"), ParseError);
  CHECK_THROWS_AS(parse_profile("family=gaussian family=gaussian"), ParseError);
  CHECK_THROWS_AS(parse_profile("family=example2 alpha=1 beta=2 r=2"), ConditionViolation);
}

TEST_CASE("values of the analytic families") {
  CHECK(RadialProfile::gaussian().eval(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(RadialProfile::exponential().eval(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(RadialProfile::bochner_riesz(2.0).eval(0.5) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(RadialProfile::example1(2.0, 2.0).eval(0.5) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(RadialProfile::remark3().eval(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(RadialProfile::remark3().eval(0.01) == doctest::Approx(std::sin(std::log(std::log(M_E / 0.01)))));
  // (1 - (1 - t^3)^2) / t^2 near 0 behaves like 2t
  const auto e2 = RadialProfile::example2(3.0, 2.0, 2.0);
  CHECK(e2.eval(1e-3) == doctest::Approx(2e-3).epsilon(1e-5));
  CHECK(e2.eval(2.0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("compact support families vanish beyond the support") {
  for (const auto& p : builtins()) {
    if (!p.support_end()) continue;
    const double e = *p.support_end();
    CHECK(p.eval(e * 1.0001) == 0.0);
    CHECK(p.eval(e + 10.0) == 0.0);
  }
}

TEST_CASE("closed derivatives agree with finite differences") {
  for (const auto& p : builtins()) {
    const auto end = p.support_end();
    for (int k = 1; k <= 3; ++k) {
      if (!p.has_closed_derivative(k)) continue;
      for (double t : {0.15, 0.4, 0.62, 0.85}) {
        const double tt = end ? t * *end : 3.0 * t;
        auto fd = numeric_derivative([&](double s) { return p.eval(s); }, k, tt, 1e-2, 1e-9, end.value_or(1e300));
        const double exact = p.derivative(k, tt).value;
        INFO(p.render(), " k=", k, " t=", tt);
        CHECK(std::abs(exact - fd.value) < 1e-5 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("structural metadata") {
  CHECK(RadialProfile::exponential().locally_absolutely_continuous(2) == std::optional<bool>(true));
  CHECK(RadialProfile::belinskii().locally_absolutely_continuous(1) == std::optional<bool>(false));
  CHECK(RadialProfile::example2(3.0, 2.0, 2.0).tail_power() == std::optional<double>(2.0));
  CHECK_FALSE(RadialProfile::gaussian().support_end());
  CHECK(RadialProfile::bochner_riesz(1.0).support_end() == std::optional<double>(1.0));
  CHECK(RadialProfile::example1(2.0, 1.0).claim_warnings(3).size() == 1);
  CHECK(RadialProfile::example1(2.0, 2.0).claim_warnings(3).empty());
}

TEST_CASE("tabulated profiles") {
  std::vector<std::pair<double, double>> knots{{0.0, 1.0}, {0.3, 0.9}, {0.5, 0.4}, {0.8, 0.35}, {1.0, 0.0}};
  auto p = RadialProfile::tabulated(knots);
  for (auto [t, f] : knots) CHECK(p.eval(t) == doctest::Approx(f).epsilon(1e-15));
  // monotone data stays within knot values
  for (double t = 0.0; t <= 1.0; t += 1e-3) {
    CHECK(p.eval(t) <= 1.0 + 1e-15);
    CHECK(p.eval(t) >= -1e-15);
  }
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    for (double u = 0.0; u <= 1.0; u += 0.05) {
      const double t = knots[i].first + u * (knots[i + 1].first - knots[i].first);
      CHECK(p.eval(t) <= knots[i].second + 1e-14);
      CHECK(p.eval(t) >= knots[i + 1].second - 1e-14);
    }
  CHECK_THROWS_AS(RadialProfile::tabulated({{0.0, 1.0}, {0.0, 2.0}}), DomainError);

  const auto path = std::filesystem::temp_directory_path() / "radialft_test_profile.csv";
  {
    std::ofstream out(path);
    out << "t,f0\n0,1\n0.5,0.5\n1,0\n";
  }
  auto q = parse_profile("family=tabulated file=" + path.string());
  CHECK(q.family() == Family::tabulated);
  CHECK(q.eval(0.5) == doctest::Approx(0.5));
  CHECK(parse_profile(q.render()) == q);
  {
    std::ofstream out(path);
    out << "t,g\n0,1\n";
  }
  CHECK_THROWS_AS(RadialProfile::tabulated_file(path.string()), ParseError);
  std::filesystem::remove(path);
}
