#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastlight/solver.hpp"

namespace fastlight {

/// A validated scenario plus the output settings that travel with it.
struct LoadedConfig {
  Scenario scenario;
  std::string out_dir = "out";

  bool operator==(const LoadedConfig&) const = default;
};

/// Reads a JSON config file, or a built-in preset when `path` names one and no
/// such file exists.
LoadedConfig parse_config(const std::string& path);

/// Validates a config tree. Unknown keys and missing required keys raise
/// ConfigError carrying the dotted key path.
LoadedConfig parse_config_json(const nlohmann::json& tree);

/// Fully explicit tree; parse_config_json(write_config(c)) == c.
nlohmann::json write_config(const LoadedConfig& config);

std::optional<nlohmann::json> preset(const std::string& name);
std::vector<std::string> preset_names();

/// Sets the value at a dotted path such as `medium[0].fluct_eps0` or `pulse.tau_ns`.
void set_config_value(nlohmann::json& tree, const std::string& path, const nlohmann::json& value);

}  // namespace fastlight
