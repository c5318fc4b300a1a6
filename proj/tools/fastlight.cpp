#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastlight/cli.hpp"
#include "fastlight/config.hpp"
#include "fastlight/errors.hpp"

using namespace fastlight;

int main(int argc, char** argv) {
  CLI::App app{"Pulse propagation through a resonant two-level medium"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string param;
  std::vector<std::string> values;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "JSON config file or preset name");
    if (config_required) opt->required();
    sub->add_option("--out", out_dir, "output directory (default: the config's out_dir)");
    sub->add_option("--seed", seed, "fluctuation seed override");
    sub->add_option("--threads", threads, "worker threads for the detuning loop");
  };

  auto* analytic = app.add_subcommand("analytic", "closed-form snapshots and stations");
  add_common(analytic, true);
  auto* simulate = app.add_subcommand("simulate", "numerical run");
  add_common(simulate, true);
  auto* verify = app.add_subcommand("verify", "checks; without --config, the acceptance list at reduced resolution");
  add_common(verify, false);
  auto* sweep = app.add_subcommand("sweep", "one run per parameter value");
  add_common(sweep, true);
  sweep->add_option("--param", param, "dotted config path, e.g. medium[0].fluct_eps0")->required();
  sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
  auto* presets = app.add_subcommand("presets", "list built-in presets, or print one with --config");
  presets->add_option("--config", config_path, "preset name");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      if (config_path.empty()) {
        for (const auto& name : preset_names()) std::cout << name << "\n";
      } else if (auto tree = preset(config_path)) {
        std::cout << tree->dump(2) << "\n";
      } else {
        throw ConfigError("config", "unknown preset '" + config_path + "'");
      }
      return kExitOk;
    }

    std::optional<LoadedConfig> config;
    if (!config_path.empty()) {
      config = parse_config(config_path);
      if (seed) config->scenario.fluct_seed = *seed;
      if (threads) config->scenario.threads = *threads;
    }
    const std::string out = !out_dir.empty() ? out_dir : config ? config->out_dir : std::string("out");

    if (analytic->parsed()) return cmd_analytic(*config, out);
    if (simulate->parsed()) return cmd_simulate(*config, out);
    if (verify->parsed()) return cmd_verify(config, out, threads.value_or(1));
    if (sweep->parsed()) return cmd_sweep(*config, param, values, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
