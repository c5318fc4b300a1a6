#pragma once

#include <string>
#include <vector>

#include "fastlight/config.hpp"

namespace fastlight {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string target;
  std::string measured;
  std::string tolerance;
};

struct AcceptanceOptions {
  bool reduced = false;  // coarser steps for the CLI verify command
  int threads = 1;
};

/// The eight acceptance checks, in order.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options);

/// Closed-form checks plus the property checks on one configured run.
std::vector<CheckResult> verify_config(const LoadedConfig& config);

/// One line per check: "[PASS] 3 name | target ... | measured ... | tolerance ...".
std::string format_report(const std::vector<CheckResult>& checks);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace fastlight
