#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schwarzstatic/exec.hpp"

namespace schwarzstatic {

struct SelftestOptions {
  std::uint64_t seed = 20240607;
  bool flip_dg4_sign = false;  ///< mutation hook: the structure-vs-oracle suite must then fail
  int refine = 0;              ///< halve the radial spacing this many times in grid-based suites
  Exec exec = Exec::Parallel;
};

struct SuiteResult {
  std::string name;
  double measured = 0;
  double tolerance = 0;
  bool pass = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SuiteResult> suites;
  bool all_pass() const;
};

/// Suites: harmonics, gauge-annihilation, gauge-recovery, structure-oracle,
/// structure-mass-variation, structure-convergence.
SelftestReport run_selftest(const SelftestOptions& opts = {});

}  // namespace schwarzstatic
