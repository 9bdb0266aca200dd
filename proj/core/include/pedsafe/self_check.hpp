#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedsafe/scenario.hpp"

namespace pedsafe {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Randomized invariant checks over the engine, plus determinism and
/// relay-vs-direct equivalence for each supplied scenario.
std::vector<CheckResult> run_self_checks(std::uint32_t seed,
                                         const std::vector<scenario::ScenarioScript>& scenarios);

}  // namespace pedsafe
