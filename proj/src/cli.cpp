#include "fastlight/cli.hpp"

#include <cstdio>
#include <iostream>

#include "fastlight/acceptance.hpp"
#include "fastlight/diagnostics.hpp"
#include "fastlight/errors.hpp"
#include "fastlight/io.hpp"

namespace fastlight {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kAnalyticSamples = 2001;

void write_failure_summary(const fs::path& dir, const LoadedConfig& config, const NumericalFailure& e) {
  fs::create_directories(dir);
  json out = {{"status", "numerical_failure"},
              {"error", e.what()},
              {"last_good_x_cm", e.last_good_x()},
              {"config_echo", write_config(config)},
              {"seed", config.scenario.fluct_seed},
              {"version", kVersion}};
  write_text(dir / "summary.json", out.dump(2) + "\n");
}

json parse_value(const std::string& raw) {
  json v = json::parse(raw, nullptr, false);
  return v.is_discarded() ? json(raw) : v;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int cmd_analytic(const LoadedConfig& config, const fs::path& out_dir) {
  const Scenario& sc = config.scenario;
  if (sc.segments.size() != 1) throw ConfigError("medium", "the closed form needs exactly one segment");
  const AnalyticScenario analytic = make_analytic_scenario(sc.pulse, sc.segments.front());
  const SimulationResult replay = analytic_replay(analytic, sc);

  fs::create_directories(out_dir);
  const RealArray x = RealArray::LinSpaced(kAnalyticSamples, sc.grid.x_min, sc.grid.x_max);
  for (std::size_t k = 0; k < sc.record.times.size(); ++k)
    write_text(out_dir / ("lab_" + std::to_string(k) + ".csv"),
               lab_csv(analytic_snapshot(analytic, sc.record.times[k], x)));
  for (std::size_t k = 0; k < replay.stations.size(); ++k)
    write_text(out_dir / ("station_" + std::to_string(k) + ".csv"),
               retarded_csv(replay.xi, replay.stations[k].omega, sc.pulse.tau));
  write_text(out_dir / "summary.json", summary_json(compute_metrics(replay), config).dump(2) + "\n");
  return kExitOk;
}

int cmd_simulate(const LoadedConfig& config, const fs::path& out_dir) {
  try {
    const SimulationResult result = run(config.scenario);
    write_run_outputs(out_dir, result, compute_metrics(result), config);
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    write_failure_summary(out_dir, config, e);
    return kExitNumericalFailure;
  }
  return kExitOk;
}

int cmd_verify(const std::optional<LoadedConfig>& config, const fs::path& out_dir, int threads) {
  std::vector<CheckResult> checks;
  try {
    checks = config ? verify_config(*config) : run_acceptance({.reduced = true, .threads = threads});
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  std::string report = format_report(checks);
  if (!config)
    report = "# reduced resolution (d_xi = tau/20 and dx doubled for the broadened runs); full-suite tolerances\n" +
             report;
  std::cout << report;
  fs::create_directories(out_dir);
  write_text(out_dir / "verify_report.txt", report);
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"id", c.id},
                   {"name", c.name},
                   {"passed", c.passed},
                   {"target", c.target},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance}});
  write_text(out_dir / "verify_report.json", arr.dump(2) + "\n");
  return all_passed(checks) ? kExitOk : kExitVerificationFailure;
}

std::vector<SweepRow> sweep(const json& tree, const std::string& param_path,
                            const std::vector<std::string>& values,
                            const std::optional<fs::path>& out_dir) {
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < values.size(); ++k) {
    SweepRow row;
    row.value = values[k];
    json clone = tree;
    set_config_value(clone, param_path, parse_value(values[k]));
    const LoadedConfig config = parse_config_json(clone);
    try {
      const SimulationResult result = run(config.scenario);
      const Metrics m = compute_metrics(result);
      row.advance_tau = m.advance_tau;
      row.area_out = m.area_out;
      row.max_trailing_amp = m.ringing.max_trailing_amp;
      row.max_norm_deviation = m.max_norm_deviation;
      row.status = "ok";
      if (out_dir) write_run_outputs(*out_dir / ("run_" + std::to_string(k)), result, m, config);
    } catch (const NumericalFailure& e) {
      row.status = "numerical_failure";
      if (out_dir) write_failure_summary(*out_dir / ("run_" + std::to_string(k)), config, e);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "value, advance_tau, area_out, max_trailing_amp, status\n";
  for (const auto& r : rows) {
    out += r.value + ", " + (r.advance_tau ? num(*r.advance_tau) : std::string("nan")) + ", " +
           num(r.area_out) + ", " + num(r.max_trailing_amp) + ", " + r.status + "\n";
  }
  return out;
}

int cmd_sweep(const LoadedConfig& config, const std::string& param_path,
              const std::vector<std::string>& values, const fs::path& out_dir) {
  const auto rows = sweep(write_config(config), param_path, values, out_dir);
  fs::create_directories(out_dir);
  write_text(out_dir / "sweep.csv", sweep_csv(rows));
  for (const auto& r : rows)
    if (r.status != "ok") return kExitNumericalFailure;
  return kExitOk;
}

}  // namespace fastlight
