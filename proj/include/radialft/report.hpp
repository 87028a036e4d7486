#pragma once

// Deterministic CSV and JSON emission.

#include <string>
#include <vector>

#include "json.hpp"
#include "radialft/diagnostics.hpp"
#include "radialft/transform.hpp"

namespace radialft::report {

using Json = nlohmann::ordered_json;

/// 17 significant digits; non-finite values as inf, -inf, nan.
std::string format_double(double x);
/// Finite numbers as numbers, the rest as strings.
Json json_number(double x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

/// Columns r,fhat,err_est,method,truncation_A.
Table transform_table(const std::vector<transform::TransformResult>& results);

Json to_json(const transform::TransformResult& result);
Json transform_json(const transform::TransformRequest& request, const std::vector<transform::TransformResult>& results);
Json to_json(const diagnostics::ConditionVerdict& verdict);
Json to_json(const diagnostics::L1ComparisonReport& report);

/// Two-space indented dump followed by a newline.
std::string dump(const Json& j);

}  // namespace radialft::report
