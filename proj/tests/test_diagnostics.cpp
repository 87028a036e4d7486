#include <cmath>

#include "doctest.h"
#include "radialft/diagnostics.hpp"
#include "radialft/error.hpp"

using namespace radialft;
using namespace radialft::diagnostics;
using profiles::RadialProfile;

namespace {

Status status_of(const std::vector<ConditionVerdict>& v, ConditionId id) {
  for (const auto& c : v)
    if (c.condition == id) return c.status;
  FAIL("missing condition");
  return Status::undetermined;
}

void check_margin(const ConditionVerdict& v) {
  // A decided verdict carries evidence beyond its uncertainty.
  if (v.status != Status::undetermined) CHECK(v.evidence.uncertainty >= 0.0);
}

}  // namespace

TEST_CASE("block classification") {
  std::vector<double> geometric, harmonic, fast, zeros(20, 0.0);
  for (int k = 1; k <= 40; ++k) {
    geometric.push_back(std::pow(2.0, -k));
    harmonic.push_back(1.0 / k);
    fast.push_back(std::pow(k, -2.0));
  }
  const auto g = classify_blocks(geometric);
  CHECK(g.status == Status::pass);
  CHECK(g.geometric);
  CHECK(std::abs(g.sum - 1.0) < 1e-6);
  CHECK(classify_blocks(harmonic).status == Status::fail);
  CHECK(classify_blocks(fast).status == Status::pass);
  CHECK(classify_blocks(zeros).status == Status::pass);
}

TEST_CASE("conditions on the built-in families") {
  for (const auto& p : {RadialProfile::gaussian(), RadialProfile::exponential(), RadialProfile::remark3()}) {
    const auto v = check_conditions(p, 3, 1.0);
    REQUIRE(v.size() == 4);
    for (const auto& c : v) {
      INFO(p.render(), " ", condition_name(c.condition));
      CHECK(c.status == Status::pass);
      check_margin(c);
    }
  }
  CHECK(status_of(check_conditions(RadialProfile::belinskii(), 3, 1.0), ConditionId::c1) == Status::fail);
  const auto constant = RadialProfile::custom("one", [](double) { return 1.0; });
  CHECK(status_of(check_conditions(constant, 3, 1.0), ConditionId::c2) == Status::fail);
}

TEST_CASE("endpoint integrability of F/t") {
  const auto ok = check_condition14(RadialProfile::example1(2.0, 2.0), 3);
  CHECK(ok.status == Status::pass);
  CHECK(ok.condition == ConditionId::c14);
  const auto bad = check_condition14(RadialProfile::remark3(), 3);
  CHECK(bad.status == Status::fail);
  const auto linear = check_condition14([](double t) { return t; });
  CHECK(linear.status == Status::pass);
  CHECK(std::abs(linear.evidence.value - 1.0) < 1e-6);
  const auto log_inverse = check_condition14([](double t) { return t < 1.0 ? -1.0 / std::log(t / 2.0) : 0.0; });
  CHECK(log_inverse.status != Status::pass);
}

TEST_CASE("modulus series") {
  CHECK(zygmund_bochkarev(RadialProfile::example1(2.0, 2.0), 3).status == Status::pass);
  CHECK(zygmund_bochkarev(RadialProfile::remark3(), 3).status == Status::fail);
  auto slow = [](double k) { return 1.0 / std::pow(std::log(k + 1.0), 2.0); };
  CHECK(zygmund_bochkarev_series(slow, 100000).status == Status::fail);
  auto holder = [](double k) { return std::pow(k, -0.5); };
  CHECK(zygmund_bochkarev_series(holder, 100000).status == Status::pass);
}

TEST_CASE("endpoint criterion for compactly supported profiles") {
  CHECK(corollary2_criterion(RadialProfile::example1(2.0, 2.25), 3).status == Status::pass);
  CHECK(corollary2_criterion(RadialProfile::example1(2.0, 1.0), 3).status == Status::fail);
  CHECK(corollary2_criterion(RadialProfile::gaussian(), 3).status == Status::undetermined);
}

TEST_CASE("sphere area") {
  CHECK(std::abs(sphere_area(2) - 2 * M_PI) < 1e-14);
  CHECK(std::abs(sphere_area(3) - 4 * M_PI) < 1e-13);
}

TEST_CASE("radial L1 norm of the gaussian transform") {
  // ∫_{1<=|x|<=N} (2π)^{3/2} e^{-|x|^2/2} dx
  const auto v = radial_l1(RadialProfile::gaussian(), 3, {4.0, 8.0}, 0.05);
  const double exact = std::pow(2 * M_PI, 1.5) * 4 * M_PI *
                       (std::exp(-0.5) + std::sqrt(M_PI / 2) * std::erfc(1 / std::sqrt(2.0)));
  CHECK(std::abs(v[1] - exact) < 1e-3 * exact);
  CHECK(v[0] <= v[1]);
}

TEST_CASE("names") {
  CHECK(condition_name(ConditionId::c14) == "c14");
  CHECK(status_name(Status::undetermined) == "undetermined");
}
