#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bregman {

/// Frozen budgets shared by the property suite and the check commands.
inline constexpr double kAffineSlackBudget = 1e-6;
inline constexpr double kConvexSlackFloor = 1e-8;
inline constexpr double kFlatnessBudget = 1e-3;
inline constexpr double kMetricHessianBudget = 1e-4;
inline constexpr double kNordenSenBudget = 5e-3;
inline constexpr double kOrthogonalityBudget = 1e-5;

/// One entry of the library-wide invariant suite.  `worst` and `budget`
/// describe the tightest sub-check in its own units (residual vs. the frozen
/// tolerance it is held against); `detail` spells out the remaining
/// sub-checks and the sample counts.
struct PropertyResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double budget = 0.0;
  std::string detail;
};

/// Runs the full cross-module property suite.  Deterministic in `seed`: the
/// same seed yields bitwise-identical results.  Order of the returned
/// entries is fixed.  Budgets are frozen here, not configurable.
std::vector<PropertyResult> run_property_suite(std::uint64_t seed);

}  // namespace bregman
