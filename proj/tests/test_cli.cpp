#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fastlight/cli.hpp"
#include "fastlight/io.hpp"

using namespace fastlight;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fastlight_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int invoke(const std::string& args) {
  const char* bin = std::getenv("FASTLIGHT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "FASTLIGHT_BIN must point at the CLI");
  const std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

fs::path write_config_file(const fs::path& dir, const json& tree) {
  const fs::path path = dir / "config.json";
  std::ofstream(path) << tree.dump(2);
  return path;
}

json short_slab(double g) {
  return {{"pulse", {{"tau_ns", 0.1}}},
          {"medium", json::array({{{"x0_cm", 0.0}, {"x1_cm", 5.0}, {"g_ns2", g}, {"t2star_ns", "sharp"}}})},
          {"grid", {{"x_min_cm", 0.0}, {"x_max_cm", 6.0}}},
          {"output", {{"snapshot_times_ns", {0.1}}, {"snapshot_stations_cm", {6.0}}}}};
}

}  // namespace

TEST_CASE("simulate writes CSV and summary") {
  const fs::path out = scratch("simulate");
  CHECK(invoke("simulate --config vacuum --out " + out.string()) == kExitOk);
  CHECK(first_line(out / "lab_0.csv") == kLabHeader);
  CHECK(first_line(out / "station_0.csv") == kRetardedHeader);
  const json summary = read_json(out / "summary.json");
  CHECK(summary["version"] == kVersion);
  CHECK(summary["seed"] == 1);
  CHECK(summary["advance_tau"] == 0.0);
  CHECK(summary.contains("config_echo"));
  CHECK(summary["ringing"].contains("zero_crossings"));
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit_codes");
  json bad = short_slab(100.0);
  bad["pulse"]["tau"] = 0.1;
  CHECK(invoke("simulate --config " + write_config_file(dir, bad).string() + " --out " + dir.string()) ==
        kExitConfigError);
  CHECK(invoke("simulate --config nonexistent_preset --out " + dir.string()) == kExitConfigError);

  // Long sharp slab with a short leading window: the peak runs into the window start.
  json overflow = short_slab(266.0);
  overflow["medium"][0]["x1_cm"] = 150.0;
  overflow["grid"] = {{"x_min_cm", 0.0}, {"x_max_cm", 150.0}, {"xi_min_ns", -1.05}};
  overflow["output"] = {{"snapshot_times_ns", json::array()}, {"snapshot_stations_cm", json::array()}};
  const fs::path out = dir / "overflow";
  CHECK(invoke("simulate --config " + write_config_file(dir, overflow).string() + " --out " + out.string()) ==
        kExitNumericalFailure);
  CHECK(read_json(out / "summary.json")["status"] == "numerical_failure");

  // A step far too coarse for the Rabi frequency breaks normalization.
  json coarse = short_slab(266.0);
  coarse["grid"]["d_xi_ns"] = 0.05;
  CHECK(invoke("verify --config " + write_config_file(dir, coarse).string() + " --out " + dir.string()) ==
        kExitVerificationFailure);
  CHECK(first_line(dir / "verify_report.txt").rfind("[FAIL] 1 normalization", 0) == 0);
}

TEST_CASE("verify on vacuum passes quickly") {
  const fs::path out = scratch("verify");
  const auto start = std::chrono::steady_clock::now();
  CHECK(invoke("verify --config vacuum --out " + out.string()) == kExitOk);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 10.0);
  CHECK(read_json(out / "verify_report.json").size() >= 4);
}

TEST_CASE("analytic command") {
  const fs::path out = scratch("analytic");
  CHECK(invoke("analytic --config slab_untruncated --out " + out.string()) == kExitOk);
  const json summary = read_json(out / "summary.json");
  CHECK(summary["linf_vs_analytic"] == 0.0);
  // phi1 / tau for the broadened slab, frozen from an independent quadrature.
  CHECK(summary["advance_tau"].get<double>() == doctest::Approx(13.3662180481971).epsilon(1e-4));
  CHECK(summary["vg_fit_over_c"].get<double>() == doctest::Approx(-3.26249323988598).epsilon(1e-3));
  for (int k = 0; k < 5; ++k) CHECK(fs::exists(out / ("lab_" + std::to_string(k) + ".csv")));
  CHECK(invoke("analytic --config vacuum --out " + out.string()) == kExitConfigError);
}

TEST_CASE("sweep command") {
  const fs::path dir = scratch("sweep");
  const fs::path cfg = write_config_file(dir, short_slab(100.0));
  const fs::path out = dir / "out";
  CHECK(invoke("sweep --config " + cfg.string() + " --param medium[0].fluct_eps0 --values 0,1e-4 --out " +
               out.string()) == kExitOk);
  std::ifstream in(out / "sweep.csv");
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  CHECK(header == "value, advance_tau, area_out, max_trailing_amp, status");
  CHECK(row0.rfind("0, ", 0) == 0);
  CHECK(row1.rfind("1e-4, ", 0) == 0);
  CHECK(row1.substr(row1.size() - 2) == "ok");
  CHECK(fs::exists(out / "run_1" / "summary.json"));
}

TEST_CASE("advance grows with coupling below the instability") {
  // phi1 / tau = tau g L / 2c for the 5 cm slab.
  const std::vector<std::string> values = {"25", "50", "100", "150"};
  const auto rows = sweep(short_slab(0.0), "medium[0].g_ns2", values, std::nullopt);
  double last = -1.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CAPTURE(values[k]);
    REQUIRE(rows[k].status == "ok");
    REQUIRE(rows[k].advance_tau.has_value());
    const double adv = *rows[k].advance_tau;
    CHECK(adv > last);
    last = adv;
    const double expected = phase_offsets(std::stod(values[k]), 0.1, 0.0, 5.0).phi1 / 0.1;
    CHECK(adv == doctest::Approx(expected).epsilon(0.1));
  }
}
