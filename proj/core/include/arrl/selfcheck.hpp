#pragma once

#include <string>
#include <vector>

namespace arrl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast property sweeps over the kinematics, gaits, simulator determinism,
/// energy bookkeeping and the progressive schedules. Each check runs in at
/// most a few seconds; the CLI selftest subcommand prints one line per check.
std::vector<CheckResult> run_selfchecks();

}  // namespace arrl
