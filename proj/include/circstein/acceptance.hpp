#pragma once

#include <string>
#include <vector>

namespace circstein {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Measured quantities; contains no timings so reruns compare byte-for-byte.
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 14;

/// Runs one acceptance check (1 .. kCriterionCount). Exceptions raised by the
/// numerics are caught and reported as a failure.
CriterionResult run_criterion(int id);

/// Runs every check in order.
std::vector<CriterionResult> run_all();

}  // namespace circstein
