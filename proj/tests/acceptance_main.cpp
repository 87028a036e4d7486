// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
// With arguments, runs only the listed criterion ids.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "radialft/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) ids = radialft::acceptance::criterion_ids();
  int failed = 0;
  for (int id : ids) {
    const auto result = radialft::acceptance::run_criterion(id);
    std::printf("%s\n", radialft::acceptance::format_line(result).c_str());
    std::fflush(stdout);
    if (!result.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
