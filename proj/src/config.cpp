#include "fastlight/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace fastlight {

using nlohmann::json;

namespace {

// Typed access to one JSON object that remembers which keys were consumed.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "missing required key");
    used_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  // Number, or one of the listed keywords mapped to a value.
  double number_or(const std::string& key, const std::string& word, double word_value) {
    const json& v = raw(key);
    if (v.is_string() && v.get<std::string>() == word) return word_value;
    if (!v.is_number()) throw ConfigError(at(key), "expected a number or \"" + word + "\"");
    return v.get<double>();
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<long long>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) return {};
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Complex complex(const std::string& key, Complex fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(at(key), "expected [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!used_.count(item.key())) throw ConfigError(at(item.key()), "unknown key");
    }
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

PulseSpec read_pulse(Section s) {
  PulseSpec p;
  p.tau = s.number("tau_ns");
  if (!(p.tau > 0.0)) throw ConfigError("pulse.tau_ns", "must be > 0");
  p.amplitude = s.number("amplitude", 2.0 / p.tau);
  p.t_peak = s.number("t_peak_ns", 0.0);
  p.trunc_halfwidth = s.has("trunc_halfwidth") ? s.number_or("trunc_halfwidth", "inf", kInf) : kInf;
  const std::string edge = s.string("edge", "hard");
  if (edge == "hard") {
    p.edge = HardEdge{};
    if (s.has("ramp_len")) throw ConfigError("pulse.ramp_len", "only valid with edge = \"cosine_ramp\"");
  } else if (edge == "cosine_ramp") {
    p.edge = CosineRamp{s.number("ramp_len")};
  } else {
    throw ConfigError("pulse.edge", "expected \"hard\" or \"cosine_ramp\"");
  }
  s.finish();
  p.validate();
  return p;
}

MediumSegment read_segment(Section s) {
  MediumSegment m;
  m.x0 = s.number("x0_cm");
  m.x1 = s.number("x1_cm");
  m.g = s.number("g_ns2");
  m.t2star = s.number_or("t2star_ns", "sharp", kInf);
  m.n_detuning = static_cast<int>(s.integer("n_detuning", 41));
  m.fluct_eps0 = s.number("fluct_eps0", 0.0);
  m.init_c1 = s.complex("init_c1", {0.0, 0.0});
  m.init_c2 = s.complex("init_c2", {1.0, 0.0});
  s.finish();
  return m;
}

json number_or_word(double v, const char* word) { return std::isfinite(v) ? json(v) : json(word); }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

LoadedConfig parse_config_json(const json& tree) {
  Section root(tree, "");
  LoadedConfig out;
  Scenario& sc = out.scenario;

  sc.pulse = read_pulse(Section(root.raw("pulse"), "pulse"));

  if (root.has("medium")) {
    const json& media = root.raw("medium");
    if (!media.is_array()) throw ConfigError("medium", "expected an array of segments");
    for (std::size_t i = 0; i < media.size(); ++i)
      sc.segments.push_back(read_segment(Section(media[i], "medium[" + std::to_string(i) + "]")));
  }

  Section grid(root.raw("grid"), "grid");
  const double x_min = grid.number("x_min_cm");
  const double x_max = grid.number("x_max_cm");
  // Segments are validated before the default window needs their dispersion.
  for (std::size_t i = 0; i < sc.segments.size(); ++i) {
    try {
      sc.segments[i].validate();
    } catch (const ConfigError& e) {
      throw ConfigError("medium[" + std::to_string(i) + "]." + e.path(),
                        std::string(e.what()).substr(e.path().size() + 2));
    }
  }
  sc.grid = default_grid(sc.pulse, sc.segments, x_min, x_max);
  if (grid.has("d_xi_ns")) {
    const double span = sc.grid.xi_max - sc.grid.xi_min;
    sc.grid.d_xi = grid.number("d_xi_ns");
    if (!(sc.grid.d_xi > 0.0)) throw ConfigError("grid.d_xi_ns", "must be > 0");
    sc.grid.xi_max = sc.grid.xi_min + std::ceil(span / sc.grid.d_xi - 1e-9) * sc.grid.d_xi;
  }
  if (grid.has("xi_min_ns")) sc.grid.xi_min = grid.number("xi_min_ns");
  if (grid.has("xi_max_ns")) sc.grid.xi_max = grid.number("xi_max_ns");
  if (grid.has("dx_cm")) {
    const double dx = grid.number_or("dx_cm", "auto", kInf);
    if (std::isfinite(dx)) sc.grid.dx = dx;
  }
  grid.finish();

  if (root.has("output")) {
    Section output(root.raw("output"), "output");
    sc.record.times = output.numbers("snapshot_times_ns");
    sc.record.stations = output.numbers("snapshot_stations_cm");
    sc.record.dense_stations = static_cast<int>(output.integer("dense_stations", 400));
    out.out_dir = output.string("out_dir", "out");
    output.finish();
  }
  if (root.has("run")) {
    Section run(root.raw("run"), "run");
    const long long seed = run.integer("seed", 0);
    if (seed < 0) throw ConfigError("run.seed", "must be >= 0");
    sc.fluct_seed = static_cast<std::uint64_t>(seed);
    sc.threads = static_cast<int>(run.integer("threads", 1));
    run.finish();
  }
  root.finish();
  sc.validate();
  return out;
}

LoadedConfig parse_config(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) {
    if (auto tree = preset(path)) return parse_config_json(*tree);
    throw ConfigError("", "config file not found: " + path);
  }
  std::ifstream in(path);
  json tree;
  try {
    tree = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("parse error in ") + path + ": " + e.what());
  }
  return parse_config_json(tree);
}

json write_config(const LoadedConfig& config) {
  const Scenario& sc = config.scenario;
  json pulse = {{"tau_ns", sc.pulse.tau},
                {"amplitude", sc.pulse.amplitude},
                {"t_peak_ns", sc.pulse.t_peak},
                {"trunc_halfwidth", number_or_word(sc.pulse.trunc_halfwidth, "inf")}};
  if (const auto* ramp = std::get_if<CosineRamp>(&sc.pulse.edge)) {
    pulse["edge"] = "cosine_ramp";
    pulse["ramp_len"] = ramp->ramp_len;
  } else {
    pulse["edge"] = "hard";
  }

  json media = json::array();
  for (const auto& m : sc.segments) {
    media.push_back({{"x0_cm", m.x0},
                     {"x1_cm", m.x1},
                     {"g_ns2", m.g},
                     {"t2star_ns", number_or_word(m.t2star, "sharp")},
                     {"n_detuning", m.n_detuning},
                     {"fluct_eps0", m.fluct_eps0},
                     {"init_c1", complex_json(m.init_c1)},
                     {"init_c2", complex_json(m.init_c2)}});
  }

  json grid = {{"xi_min_ns", sc.grid.xi_min}, {"xi_max_ns", sc.grid.xi_max}, {"d_xi_ns", sc.grid.d_xi},
               {"x_min_cm", sc.grid.x_min},   {"x_max_cm", sc.grid.x_max}};
  grid["dx_cm"] = sc.grid.dx ? json(*sc.grid.dx) : json("auto");

  return {{"pulse", pulse},
          {"medium", media},
          {"grid", grid},
          {"output",
           {{"snapshot_times_ns", sc.record.times},
            {"snapshot_stations_cm", sc.record.stations},
            {"dense_stations", sc.record.dense_stations},
            {"out_dir", config.out_dir}}},
          {"run", {{"seed", sc.fluct_seed}, {"threads", sc.threads}}}};
}

namespace {

json reference_slab(bool sharp) {
  const double g = 266.0;
  const double t2star = 0.733;
  const double length = slab_length(g, t2star, 250.0);
  return {{"x0_cm", 0.0},
          {"x1_cm", length},
          {"g_ns2", g},
          {"t2star_ns", sharp ? json("sharp") : json(t2star)},
          {"n_detuning", 41}};
}

json reference_tree(bool truncated, bool sharp) {
  const double length = slab_length(266.0, 0.733, 250.0);
  json pulse = {{"tau_ns", 0.1}, {"t_peak_ns", 0.0}};
  pulse["trunc_halfwidth"] = truncated ? json(25.0) : json("inf");
  pulse["edge"] = "hard";
  return {{"pulse", pulse},
          {"medium", json::array({reference_slab(sharp)})},
          {"grid", {{"x_min_cm", -45.0}, {"x_max_cm", length + 15.0}, {"dx_cm", "auto"}}},
          {"output",
           {{"snapshot_times_ns", {-1.2, -0.6, -0.2, 0.6, 1.5}},
            {"snapshot_stations_cm", {0.0, 0.5 * length, length, length + 15.0}},
            {"out_dir", "out"}}},
          {"run", {{"seed", 1}, {"threads", 1}}}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"slab_untruncated", "slab_truncated", "slab_truncated_sharp", "vacuum"};
}

std::optional<json> preset(const std::string& name) {
  if (name == "slab_untruncated") return reference_tree(false, false);
  if (name == "slab_truncated") return reference_tree(true, false);
  if (name == "slab_truncated_sharp") return reference_tree(true, true);
  if (name == "vacuum") {
    return json{{"pulse", {{"tau_ns", 0.1}, {"trunc_halfwidth", 25.0}}},
                {"medium", json::array()},
                {"grid", {{"x_min_cm", 0.0}, {"x_max_cm", 30.0}, {"dx_cm", "auto"}}},
                {"output",
                 {{"snapshot_times_ns", {0.5}}, {"snapshot_stations_cm", {30.0}}, {"out_dir", "out"}}},
                {"run", {{"seed", 1}, {"threads", 1}}}};
  }
  return std::nullopt;
}

void set_config_value(json& tree, const std::string& path, const json& value) {
  json* node = &tree;
  std::size_t pos = 0;
  while (pos < path.size()) {
    const std::size_t dot = path.find('.', pos);
    std::string token = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    pos = dot == std::string::npos ? path.size() : dot + 1;

    std::optional<std::size_t> index;
    if (const auto open = token.find('['); open != std::string::npos) {
      const auto close = token.find(']', open);
      if (close == std::string::npos) throw ConfigError(path, "malformed parameter path");
      index = std::stoul(token.substr(open + 1, close - open - 1));
      token = token.substr(0, open);
    }
    if (!node->is_object() || !node->contains(token)) {
      if (pos < path.size() || index) throw ConfigError(path, "no such section in config");
      (*node)[token] = value;
      return;
    }
    node = &(*node)[token];
    if (index) {
      if (!node->is_array() || *index >= node->size()) throw ConfigError(path, "index out of range");
      node = &(*node)[*index];
    }
  }
  *node = value;
}

}  // namespace fastlight
