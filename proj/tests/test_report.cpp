#include <cmath>
#include <limits>

#include "doctest.h"
#include "radialft/report.hpp"

using namespace radialft;
using namespace radialft::report;

TEST_CASE("float formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
  CHECK(json_number(2.5).is_number());
  CHECK(json_number(std::nan("")).is_string());
}

TEST_CASE("transform CSV schema") {
  transform::TransformResult a;
  a.r = 0.5;
  a.value = 1.25;
  a.err_est = 1e-12;
  a.truncation_A = std::numeric_limits<double>::infinity();
  const auto csv = transform_table({a}).csv();
  CHECK(csv == "r,fhat,err_est,method,truncation_A\n0.5,1.25,9.9999999999999998e-13,eq6,inf\n");
}

TEST_CASE("verdict JSON schema") {
  diagnostics::ConditionVerdict v;
  v.condition = diagnostics::ConditionId::c14;
  v.status = diagnostics::Status::fail;
  v.evidence = {1.5, 0.25, 0.93};
  const auto j = to_json(v);
  CHECK(dump(j) ==
        "{\n  \"condition\": \"c14\",\n  \"status\": \"fail\",\n  \"evidence\": {\n    \"value\": 1.5,\n"
        "    \"uncertainty\": 0.25,\n    \"slope\": 0.93\n  }\n}\n");
}

TEST_CASE("transform JSON carries the request and sign convention") {
  transform::TransformRequest req{profiles::RadialProfile::gaussian(), 3, 1.0};
  transform::TransformResult a;
  a.r = 1.0;
  a.value = 2.0;
  a.cross_check = 1e-13;
  const auto j = transform_json(req, {a});
  CHECK(j.dump() == transform_json(req, {a}).dump());
  CHECK(to_json(a)["sign_convention"] == transform::kSignConvention);
  CHECK(to_json(a).contains("cross_check"));
}
