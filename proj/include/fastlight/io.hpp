#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fastlight/analytic.hpp"
#include "fastlight/config.hpp"
#include "fastlight/metrics.hpp"
#include "fastlight/solver.hpp"

namespace fastlight {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr const char* kLabHeader =
    "x_cm, x_over_ctau, re_omega_per_ns, im_omega_per_ns, abs_omega_per_ns";
inline constexpr const char* kRetardedHeader = "xi_ns, xi_over_tau, re_omega_per_ns, im_omega_per_ns";

/// Lab-frame snapshot as CSV text, 17 significant digits.
std::string lab_csv(const FieldSnapshot& snap);

/// Retarded-frame station as CSV text, 17 significant digits.
std::string retarded_csv(const RealArray& xi, const Field& omega, double tau);

nlohmann::json metrics_json(const Metrics& m);

/// Metrics keys at top level plus config_echo, seed and version.
nlohmann::json summary_json(const Metrics& m, const LoadedConfig& config);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Writes lab_<k>.csv, station_<k>.csv and summary.json under `dir`.
void write_run_outputs(const std::filesystem::path& dir, const SimulationResult& result,
                       const Metrics& metrics, const LoadedConfig& config);

}  // namespace fastlight
