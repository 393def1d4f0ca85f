#pragma once

// End-to-end verification checks shared by `netbound verify` and the
// acceptance test binary.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace netbound::acceptance {

/// Reference values the checks compare against. Replacing one with a wrong
/// formula must make the corresponding check fail.
struct Oracles {
  std::function<double(double)> ad_emax;   // log2(2 - lambda)
  std::function<double(double)> ad_lower;  // piecewise lower bound F(lambda)
  double mu_half_one = 0.305;              // mu(k=1, x=0.5, lambda=1)

  Oracles();
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCheckCount = 10;

/// Runs the listed checks (ids 1..10) in ascending order; empty means all.
std::vector<CheckResult> run_checks(const std::vector<int>& ids = {},
                                    const Oracles& oracles = Oracles());

bool all_passed(const std::vector<CheckResult>& results);

/// One line per check: "PASS [n] name: detail (t s)".
void print_report(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace netbound::acceptance
