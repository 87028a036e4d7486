#pragma once

// End-to-end acceptance checks shared by the test suite and `radialft selftest`.

#include <string>
#include <vector>

namespace radialft::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Deterministic summary of the measured quantities.
  std::string detail;
};

std::vector<int> criterion_ids();
CriterionResult run_criterion(int id);
/// "PASS <id> <name>: <detail>" or "FAIL ...".
std::string format_line(const CriterionResult& result);

}  // namespace radialft::acceptance
