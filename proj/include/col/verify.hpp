#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace col {
namespace verify {

struct CheckResult {
  std::string module;
  std::string name;
  bool pass = false;
  double measured = 0.0;  // worst observed value for the check
  double limit = 0.0;     // threshold it was compared against
  std::string detail;
};

// Module scopes: core, geometry, algorithms, equilibrium, regret,
// problems_synthetic, problems_il, harness, or "all". `fault` names a seeded
// fault-injection fixture (negative control) that must make the suite fail:
// "regret-delta" corrupts a delta series, "harness-csv" corrupts a CSV field.
std::vector<CheckResult> run_checks(const std::string& scope, const std::string& fault = "");

bool all_pass(const std::vector<CheckResult>& results);
void print_results(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace verify
}  // namespace col
