#include "fastlight/io.hpp"

#include <cstdio>
#include <fstream>

namespace fastlight {

using nlohmann::json;

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
  char buf[32];
  bool first = true;
  for (double v : values) {
    if (!first) out += ", ";
    first = false;
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  }
  out += '\n';
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string lab_csv(const FieldSnapshot& snap) {
  std::string out = kLabHeader;
  out += '\n';
  const double ctau = kSpeedOfLight * snap.tau;
  for (Eigen::Index i = 0; i < snap.x.size(); ++i) {
    const Complex w = snap.omega(i);
    append_row(out, {snap.x(i), snap.x(i) / ctau, w.real(), w.imag(), std::abs(w)});
  }
  return out;
}

std::string retarded_csv(const RealArray& xi, const Field& omega, double tau) {
  std::string out = kRetardedHeader;
  out += '\n';
  for (Eigen::Index k = 0; k < xi.size(); ++k) append_row(out, {xi(k), xi(k) / tau, omega(k).real(), omega(k).imag()});
  return out;
}

json metrics_json(const Metrics& m) {
  json trajectory = json::array();
  for (const auto& p : m.peak_trajectory) trajectory.push_back({p.x, optional_json(p.xi_peak)});
  return {{"area_in", m.area_in},
          {"area_out", m.area_out},
          {"area_in_abs", m.area_in_abs},
          {"area_out_abs", m.area_out_abs},
          {"peak_trajectory", trajectory},
          {"vg_fit_over_c", optional_json(m.vg_fit_over_c)},
          {"advance_tau", optional_json(m.advance_tau)},
          {"linf_vs_analytic", optional_json(m.linf_vs_analytic)},
          {"front_leakage", m.front_leakage},
          {"ringing", {{"zero_crossings", m.ringing.zero_crossings},
                       {"max_trailing_amp", m.ringing.max_trailing_amp}}},
          {"max_norm_deviation", m.max_norm_deviation},
          {"max_imag_rel", m.max_imag_rel},
          {"dx_cm", m.dx_cm}};
}

json summary_json(const Metrics& m, const LoadedConfig& config) {
  json out = metrics_json(m);
  out["config_echo"] = write_config(config);
  out["seed"] = config.scenario.fluct_seed;
  out["version"] = kVersion;
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_run_outputs(const std::filesystem::path& dir, const SimulationResult& result,
                       const Metrics& metrics, const LoadedConfig& config) {
  std::filesystem::create_directories(dir);
  const double tau = result.scenario.pulse.tau;
  for (std::size_t k = 0; k < result.lab.size(); ++k)
    write_text(dir / ("lab_" + std::to_string(k) + ".csv"), lab_csv(result.lab[k]));
  for (std::size_t k = 0; k < result.stations.size(); ++k)
    write_text(dir / ("station_" + std::to_string(k) + ".csv"),
               retarded_csv(result.xi, result.stations[k].omega, tau));
  write_text(dir / "summary.json", summary_json(metrics, config).dump(2) + "\n");
}

}  // namespace fastlight
