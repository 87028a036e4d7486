#include "radialft/report.hpp"

#include <cmath>
#include <cstdio>

namespace radialft::report {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += '\n';
  }
  return out;
}

Table transform_table(const std::vector<transform::TransformResult>& results) {
  Table t;
  t.columns = {"r", "fhat", "err_est", "method", "truncation_A"};
  for (const auto& r : results)
    t.rows.push_back({format_double(r.r), format_double(r.value), format_double(r.err_est),
                      transform::method_name(r.method), format_double(r.truncation_A)});
  return t;
}

Json to_json(const transform::TransformResult& result) {
  Json j;
  j["r"] = json_number(result.r);
  j["fhat"] = json_number(result.value);
  j["err_est"] = json_number(result.err_est);
  j["method"] = transform::method_name(result.method);
  j["truncation_A"] = json_number(result.truncation_A);
  j["sign_convention"] = result.sign_convention_id;
  if (result.cross_check) j["cross_check"] = json_number(*result.cross_check);
  return j;
}

Json transform_json(const transform::TransformRequest& request, const std::vector<transform::TransformResult>& results) {
  Json j;
  j["profile"] = request.profile.render();
  j["n"] = request.n;
  j["alpha"] = request.alpha;
  j["method"] = transform::method_name(request.method);
  Json rows = Json::array();
  for (const auto& r : results) rows.push_back(to_json(r));
  j["results"] = rows;
  return j;
}

Json to_json(const diagnostics::ConditionVerdict& verdict) {
  Json j;
  j["condition"] = diagnostics::condition_name(verdict.condition);
  j["status"] = diagnostics::status_name(verdict.status);
  j["evidence"] = {{"value", json_number(verdict.evidence.value)},
                   {"uncertainty", json_number(verdict.evidence.uncertainty)},
                   {"slope", json_number(verdict.evidence.slope)}};
  return j;
}

Json to_json(const diagnostics::L1ComparisonReport& report) {
  Json j;
  j["constant_printed"] = json_number(report.constant_printed);
  j["constant_derived"] = json_number(report.constant_derived);
  j["residual_bound"] = json_number(report.residual_bound);
  j["normalized_residual"] = json_number(report.normalized_residual);
  j["diverging"] = report.diverging;
  j["lhs_growth"] = json_number(report.lhs_growth);
  j["rhs_growth"] = json_number(report.rhs_growth);
  Json rows = Json::array();
  for (std::size_t i = 0; i < report.N_grid.size(); ++i) {
    rows.push_back({{"N", json_number(report.N_grid[i])},
                    {"lhs", json_number(report.lhs[i])},
                    {"rhs", json_number(report.rhs[i])},
                    {"residual", json_number(report.residual[i])},
                    {"residual_printed", json_number(report.residual_printed[i])}});
  }
  j["rows"] = rows;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace radialft::report
