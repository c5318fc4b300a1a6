#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastlight/config.hpp"

namespace fastlight {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitNumericalFailure = 2,
  kExitVerificationFailure = 3,
};

/// Closed-form snapshots (lab_<k>.csv), retarded stations and summary.json.
int cmd_analytic(const LoadedConfig& config, const std::filesystem::path& out_dir);

/// Numerical run; exit 2 on numerical failure (a failure summary is still written).
int cmd_simulate(const LoadedConfig& config, const std::filesystem::path& out_dir);

/// With a config: closed-form checks plus conservation, causality and determinism
/// of that config's run. Without: the full check list at reduced resolution.
int cmd_verify(const std::optional<LoadedConfig>& config, const std::filesystem::path& out_dir,
               int threads);

struct SweepRow {
  std::string value;
  std::optional<double> advance_tau;
  double area_out = 0.0;
  double max_trailing_amp = 0.0;
  double max_norm_deviation = 0.0;
  std::string status;
};

/// Clones the config tree once per value with `param_path` replaced, runs each
/// clone and writes its outputs under out_dir/run_<k> when out_dir is given.
std::vector<SweepRow> sweep(const nlohmann::json& tree, const std::string& param_path,
                            const std::vector<std::string>& values,
                            const std::optional<std::filesystem::path>& out_dir);

/// Runs sweep() and writes sweep.csv.
int cmd_sweep(const LoadedConfig& config, const std::string& param_path,
              const std::vector<std::string>& values, const std::filesystem::path& out_dir);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace fastlight
