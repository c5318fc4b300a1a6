#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fastlight/config.hpp"

using namespace fastlight;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "pulse": {"tau_ns": 0.1, "trunc_halfwidth": 25},
    "medium": [{"x0_cm": 0, "x1_cm": 5, "g_ns2": 266, "t2star_ns": 0.733, "n_detuning": 21}],
    "grid": {"x_min_cm": -1, "x_max_cm": 6}
  })");
}

std::string error_path(const json& tree) {
  try {
    parse_config_json(tree);
  } catch (const ConfigError& e) {
    return e.path() + " | " + e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const LoadedConfig c = parse_config_json(minimal());
  CHECK(c.scenario.pulse.tau == 0.1);
  CHECK(c.scenario.pulse.amplitude == doctest::Approx(20.0));
  CHECK(c.scenario.pulse.trunc_halfwidth == 25.0);
  REQUIRE(c.scenario.segments.size() == 1);
  CHECK(c.scenario.segments[0].n_detuning == 21);
  CHECK(c.scenario.grid.d_xi == doctest::Approx(0.0025));
  CHECK_FALSE(c.scenario.grid.dx.has_value());
  CHECK(c.scenario.threads == 1);
}

TEST_CASE("errors carry the key path") {
  json t = minimal();
  t["pulse"].erase("tau_ns");
  CHECK(error_path(t).rfind("pulse.tau_ns", 0) == 0);

  t = minimal();
  t["medium"].push_back({{"x0_cm", 4.0}, {"x1_cm", 5.5}, {"g_ns2", 100.0}, {"t2star_ns", "sharp"}});
  const std::string overlap = error_path(t);
  CHECK(overlap.find("medium[0]") != std::string::npos);
  CHECK(overlap.find("medium[1]") != std::string::npos);

  t = minimal();
  t["grid"]["dx"] = 0.1;
  CHECK(error_path(t).rfind("grid.dx", 0) == 0);

  t = minimal();
  t["medium"][0]["t2_star_ns"] = 1.0;
  CHECK(error_path(t).rfind("medium[0].t2_star_ns", 0) == 0);

  t = minimal();
  t["medium"][0]["n_detuning"] = 20;
  CHECK(error_path(t).rfind("medium[0].n_detuning", 0) == 0);

  t = minimal();
  t["grid"]["dx_cm"] = 0.3;
  CHECK(error_path(t).rfind("grid.dx_cm", 0) == 0);

  t = minimal();
  t["pulse"]["edge"] = "soft";
  CHECK(error_path(t).rfind("pulse.edge", 0) == 0);

  t = minimal();
  t["grid"]["xi_min_ns"] = 0.0;
  CHECK(error_path(t).rfind("grid.xi_min_ns", 0) == 0);

  CHECK_THROWS_AS(parse_config("no_such_preset_or_file"), ConfigError);
}

TEST_CASE("write_config round trip") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const LoadedConfig c = parse_config(name);
    const json tree = write_config(c);
    CHECK(parse_config_json(tree) == c);
    CHECK(write_config(parse_config_json(tree)) == tree);
  }
  json t = minimal();
  t["pulse"]["edge"] = "cosine_ramp";
  t["pulse"]["ramp_len"] = 2.0;
  t["medium"][0]["init_c1"] = {0.6, 0.0};
  t["medium"][0]["init_c2"] = {0.0, 0.8};
  t["medium"][0]["fluct_eps0"] = 1e-3;
  t["grid"]["dx_cm"] = 0.07;
  t["run"] = {{"seed", 99}, {"threads", 2}};
  const LoadedConfig c = parse_config_json(t);
  CHECK(std::get<CosineRamp>(c.scenario.pulse.edge).ramp_len == 2.0);
  CHECK(c.scenario.segments[0].init_c2 == Complex(0.0, 0.8));
  CHECK(c.scenario.fluct_seed == 99);
  CHECK(parse_config_json(write_config(c)) == c);
}

TEST_CASE("presets") {
  const LoadedConfig broad = parse_config("slab_truncated");
  CHECK(broad.scenario.pulse.trunc_halfwidth == 25.0);
  CHECK(broad.scenario.segments[0].t2star == 0.733);
  CHECK(broad.scenario.segments[0].x1 == doctest::Approx(30.6700978678802).epsilon(1e-12));
  CHECK(parse_config("slab_truncated_sharp").scenario.segments[0].sharp());
  CHECK_FALSE(parse_config("slab_untruncated").scenario.pulse.truncated());
  CHECK(parse_config("vacuum").scenario.segments.empty());
}

TEST_CASE("config file with comments") {
  const auto path = std::filesystem::temp_directory_path() / "fastlight_config_test.json";
  {
    std::ofstream out(path);
    out << "// a vacuum run\n" << minimal().dump(2) << "\n";
  }
  CHECK(parse_config(path.string()).scenario.segments.size() == 1);
  {
    std::ofstream out(path);
    out << "{ \"pulse\": ";
  }
  CHECK_THROWS_AS(parse_config(path.string()), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("set_config_value") {
  json t = minimal();
  set_config_value(t, "medium[0].fluct_eps0", 1e-4);
  CHECK(t["medium"][0]["fluct_eps0"] == 1e-4);
  set_config_value(t, "pulse.tau_ns", 0.2);
  CHECK(t["pulse"]["tau_ns"] == 0.2);
  CHECK_THROWS_AS(set_config_value(t, "medium[3].g_ns2", 1.0), ConfigError);
  CHECK_THROWS_AS(set_config_value(t, "nosection.key", 1.0), ConfigError);
}
