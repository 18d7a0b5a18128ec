#pragma once

#include <string>
#include <vector>

#include "carath/types.hpp"

namespace carath {

struct SelftestResult {
  std::string suite;
  int passed = 0;
  int failed = 0;
  std::vector<std::string> failures;
  bool ok() const { return failed == 0; }
};

// suite: "core" | "stieltjes" | "helly" | "full"; throws invalid_argument on
// unknown names. Deterministic for a fixed seed.
SelftestResult run_selftest(const std::string& suite, std::uint64_t seed);

}  // namespace carath
