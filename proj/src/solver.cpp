#include "fastlight/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "fastlight/sech.hpp"

namespace fastlight {

namespace {

constexpr Complex kI{0.0, 1.0};

bool near_integer(double v) { return std::abs(v - std::round(v)) <= 1e-6 * std::max(1.0, std::abs(v)); }

// One RK4 step in the frame co-rotating with the detuning: c2 = e^{-i delta s} b
// over the step, so free precession is exact and RK4 only resolves the Rabi
// coupling. The field is linear between omega0 and omega1. `rot_half` and
// `rot_full` are e^{-i delta h/2} and e^{-i delta h}.
inline void rk4_step(Complex& c1, Complex& c2, Complex omega0, Complex omega1, Complex rot_half,
                     Complex rot_full, double h) {
  const Complex omega_mid = 0.5 * (omega0 + omega1);
  const Complex half_i{0.0, 0.5};
  auto d1 = [&](Complex om, Complex rot, Complex b) { return half_i * om * rot * b; };
  auto d2 = [&](Complex om, Complex rot, Complex a) { return half_i * std::conj(om * rot) * a; };

  const Complex k1a = d1(omega0, 1.0, c2);
  const Complex k1b = d2(omega0, 1.0, c1);
  Complex a = c1 + 0.5 * h * k1a;
  Complex b = c2 + 0.5 * h * k1b;
  const Complex k2a = d1(omega_mid, rot_half, b);
  const Complex k2b = d2(omega_mid, rot_half, a);
  a = c1 + 0.5 * h * k2a;
  b = c2 + 0.5 * h * k2b;
  const Complex k3a = d1(omega_mid, rot_half, b);
  const Complex k3b = d2(omega_mid, rot_half, a);
  a = c1 + h * k3a;
  b = c2 + h * k3b;
  const Complex k4a = d1(omega1, rot_full, b);
  const Complex k4b = d2(omega1, rot_full, a);
  c1 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
  c2 = rot_full * (c2 + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b));
}

// Weighted coherence trajectory of one node, written into `out`.
double integrate_node(const Field& omega, double d_xi, double delta, double weight, Complex c1,
                      Complex c2, Complex* out) {
  const double norm0 = std::norm(c1) + std::norm(c2);
  const Complex rot_half = std::polar(1.0, -0.5 * delta * d_xi);
  const Complex rot_full = std::polar(1.0, -delta * d_xi);
  double worst = 0.0;
  const Eigen::Index n = omega.size();
  out[0] = weight * c1 * std::conj(c2);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    rk4_step(c1, c2, omega(k), omega(k + 1), rot_half, rot_full, d_xi);
    out[k + 1] = weight * c1 * std::conj(c2);
    worst = std::max(worst, std::abs(std::norm(c1) + std::norm(c2) - norm0));
  }
  return worst;
}

bool all_finite(const Field& f) { return f.real().allFinite() && f.imag().allFinite(); }

}  // namespace

Eigen::Index SimGrid::xi_steps() const { return std::llround((xi_max - xi_min) / d_xi); }

RealArray SimGrid::xi() const {
  const Eigen::Index n = xi_steps();
  RealArray out(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) out(k) = xi_min + d_xi * static_cast<double>(k);
  return out;
}

void SimGrid::validate() const {
  if (!(d_xi > 0.0)) throw ConfigError("grid.d_xi_ns", "must be > 0");
  if (!(xi_max > xi_min)) throw ConfigError("grid.xi_max_ns", "must exceed grid.xi_min_ns");
  if (!near_integer((xi_max - xi_min) / d_xi))
    throw ConfigError("grid.d_xi_ns", "(xi_max - xi_min) / d_xi must be an integer");
  if (!(x_max > x_min)) throw ConfigError("grid.x_max_cm", "must exceed grid.x_min_cm");
  if (dx) {
    if (!(*dx > 0.0)) throw ConfigError("grid.dx_cm", "must be > 0");
    if (!near_integer((x_max - x_min) / *dx))
      throw ConfigError("grid.dx_cm", "(x_max - x_min) / dx must be an integer");
  }
}

double advance_estimate(const PulseSpec& pulse, const std::vector<MediumSegment>& segments) {
  double total = 0.0;
  for (const auto& seg : segments) {
    const GroupVelocity gv = group_velocity(seg.g, pulse.tau, detuning_grid(seg));
    total += seg.length() * gv.one_minus_c_over_vg / kSpeedOfLight;
  }
  return total;
}

void Scenario::validate() const {
  pulse.validate();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    try {
      segments[i].validate();
    } catch (const ConfigError& e) {
      throw ConfigError("medium[" + std::to_string(i) + "]." + e.path(),
                        std::string(e.what()).substr(e.path().size() + 2));
    }
  }
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (segments[i].x0 < segments[i - 1].x1)
      throw ConfigError("medium[" + std::to_string(i - 1) + "], medium[" + std::to_string(i) + "]",
                        "segments overlap or are not sorted by x0_cm");
  }
  grid.validate();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].x0 < grid.x_min || segments[i].x1 > grid.x_max)
      throw ConfigError("medium[" + std::to_string(i) + "]",
                        "segment lies outside [grid.x_min_cm, grid.x_max_cm]");
  }
  for (double s : record.stations) {
    if (s < grid.x_min || s > grid.x_max)
      throw ConfigError("output.snapshot_stations_cm", "station outside the x window");
  }
  if (threads < 1) throw ConfigError("run.threads", "must be >= 1");
  if (record.dense_stations < 2) throw ConfigError("output.dense_stations", "must be >= 2");

  const double tau = pulse.tau;
  const double advance = std::max(advance_estimate(pulse, segments), 0.0);
  const double half = pulse.truncated() ? pulse.trunc_halfwidth * tau : 10.0 * tau;
  const double margin = pulse.truncated() ? 10.0 * tau : 0.0;
  const double tol = 1e-9 * std::max(1.0, std::abs(pulse.t_peak) + half);
  if (grid.xi_min > pulse.t_peak - half + tol)
    throw ConfigError("grid.xi_min_ns", "window must start before the pulse front");
  if (grid.xi_max < pulse.t_peak + half + advance + margin - tol)
    throw ConfigError("grid.xi_max_ns",
                      "window must contain the pulse support plus advance and 10 tau margin");
}

SimGrid default_grid(const PulseSpec& pulse, const std::vector<MediumSegment>& segments,
                     double x_min, double x_max) {
  const double tau = pulse.tau;
  const double w = pulse.truncated() ? pulse.trunc_halfwidth : 30.0;
  const double advance = std::max(advance_estimate(pulse, segments), 0.0);
  SimGrid grid;
  grid.d_xi = tau / 40.0;
  grid.xi_min = pulse.t_peak - (w + 5.0) * tau;
  const double span = (pulse.t_peak + (w + 20.0) * tau + advance) - grid.xi_min;
  const double steps = std::ceil(span / grid.d_xi - 1e-9);
  grid.xi_max = grid.xi_min + steps * grid.d_xi;
  grid.x_min = x_min;
  grid.x_max = x_max;
  return grid;
}

double auto_dx(const Scenario& scenario) {
  const double range = scenario.grid.x_max - scenario.grid.x_min;
  double g_max = 0.0;
  for (const auto& seg : scenario.segments) g_max = std::max(g_max, seg.g);
  if (g_max == 0.0) return range / std::max(1, scenario.record.dense_stations);
  const double target = 0.05 * kSpeedOfLight / (0.5 * g_max);
  return range / std::ceil(range / target);
}

Complex input_envelope(const PulseSpec& pulse, double xi) {
  const double offset = xi - pulse.t_peak;
  double window = 1.0;
  if (pulse.truncated()) {
    const double half = pulse.trunc_halfwidth * pulse.tau;
    const double inside = half - std::abs(offset);  // distance from the nearer edge
    if (inside < 0.0) return {0.0, 0.0};
    if (const auto* ramp = std::get_if<CosineRamp>(&pulse.edge)) {
      const double ramp_width = ramp->ramp_len * pulse.tau;
      if (inside < ramp_width)
        window = 0.5 * (1.0 - std::cos(std::numbers::pi * inside / ramp_width));
    }
  }
  return {pulse.amplitude * sech(offset / pulse.tau) * window, 0.0};
}

Field input_field(const PulseSpec& pulse, const RealArray& xi) {
  Field out(xi.size());
  for (Eigen::Index k = 0; k < xi.size(); ++k) out(k) = input_envelope(pulse, xi(k));
  return out;
}

Amplitudes bloch_step(const Amplitudes& c, Complex omega_start, Complex omega_end, double delta,
                      double d_xi) {
  const double norm = c.squaredNorm();
  if (std::abs(norm - 1.0) > 1e-6)
    throw DomainError("bloch_step: amplitudes not normalized (|c|^2 = " + std::to_string(norm) + ")");
  Complex c1 = c(0);
  Complex c2 = c(1);
  rk4_step(c1, c2, omega_start, omega_end, std::polar(1.0, -0.5 * delta * d_xi),
           std::polar(1.0, -delta * d_xi), d_xi);
  if (!std::isfinite(c1.real()) || !std::isfinite(c1.imag()) || !std::isfinite(c2.real()) ||
      !std::isfinite(c2.imag()))
    throw NumericalFailure("bloch_step: non-finite amplitudes at delta = " + std::to_string(delta),
                           0.0);
  return {c1, c2};
}

Complex polarization(const Field& c1, const Field& c2, const DetuningGrid& grid) {
  if (c1.size() != grid.size() || c2.size() != grid.size())
    throw DomainError("polarization: amplitude count does not match the detuning grid");
  Complex sum{0.0, 0.0};
  for (Eigen::Index j = 0; j < grid.size(); ++j) sum += grid.weights(j) * c1(j) * std::conj(c2(j));
  return sum;
}

PolarizationTrace integrate_polarization(const Field& omega, double d_xi,
                                         const DetuningGrid& grid, const NodeAmplitudes& atoms,
                                         int threads) {
  const Eigen::Index n = omega.size();
  const Eigen::Index nodes = grid.size();
  Eigen::ArrayXXcd contrib(n, nodes);
  RealArray deviation(nodes);

#pragma omp parallel for num_threads(threads) schedule(static)
  for (Eigen::Index j = 0; j < nodes; ++j) {
    deviation(j) = integrate_node(omega, d_xi, grid.nodes(j), grid.weights(j), atoms.c1(j),
                                  atoms.c2(j), &contrib(0, j));
  }

  PolarizationTrace trace;
  trace.p = Field::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex sum{0.0, 0.0};
    for (Eigen::Index j = 0; j < nodes; ++j) sum += contrib(k, j);
    trace.p(k) = sum;
  }
  trace.max_norm_deviation = nodes > 0 ? deviation.maxCoeff() : 0.0;
  return trace;
}

SolverState advance_x(const SolverState& state, double dx, double d_xi,
                      const NodeAmplitudes& next_atoms, int threads, double* max_norm_deviation) {
  SolverState next = state;
  next.x = state.x + dx;
  next.atoms = next_atoms;
  if (state.g == 0.0) return next;

  const Complex kick = -kI * state.g * dx / kSpeedOfLight;
  const PolarizationTrace here = integrate_polarization(state.omega, d_xi, state.grid, state.atoms, threads);
  const Field predicted = state.omega + kick * here.p;
  const PolarizationTrace there = integrate_polarization(predicted, d_xi, state.grid, next_atoms, threads);
  next.omega = state.omega + 0.5 * kick * (here.p + there.p);

  if (max_norm_deviation)
    *max_norm_deviation = std::max({*max_norm_deviation, here.max_norm_deviation, there.max_norm_deviation});
  if (!all_finite(next.omega))
    throw NumericalFailure("advance_x: non-finite field after step from x = " + std::to_string(state.x) + " cm",
                           state.x);
  return next;
}

NodeAmplitudes fluctuation_cell(const MediumSegment& segment, Eigen::Index nodes,
                                std::uint64_t seed, std::uint64_t cell) {
  if (segment.fluct_eps0 == 0.0) return NodeAmplitudes::uniform(nodes, segment.init_c1, segment.init_c2);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(cell >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> tip(0.0, segment.fluct_eps0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  NodeAmplitudes out{Field(nodes), Field(nodes)};
  for (Eigen::Index j = 0; j < nodes; ++j) {
    const double theta = tip(rng);
    const double chi = phase(rng);
    const double cs = std::cos(0.5 * theta);
    const Complex b = kI * std::sin(0.5 * theta) * std::polar(1.0, chi);
    // Unitary tip [[cos, b], [-conj(b), cos]] applied to the segment's initial state.
    out.c1(j) = cs * segment.init_c1 + b * segment.init_c2;
    out.c2(j) = -std::conj(b) * segment.init_c1 + cs * segment.init_c2;
  }
  return out;
}

MarchPlan plan_march(const Scenario& scenario) {
  const SimGrid& grid = scenario.grid;
  MarchPlan plan;
  plan.dx = grid.dx ? *grid.dx : auto_dx(scenario);
  const long steps = std::lround((grid.x_max - grid.x_min) / plan.dx);

  std::vector<double> pinned;
  for (const auto& seg : scenario.segments) {
    pinned.push_back(seg.x0);
    pinned.push_back(seg.x1);
  }
  pinned.insert(pinned.end(), scenario.record.stations.begin(), scenario.record.stations.end());

  std::vector<double> points;
  points.reserve(steps + 1 + pinned.size());
  for (long k = 0; k <= steps; ++k) points.push_back(k == steps ? grid.x_max : grid.x_min + plan.dx * k);
  const double tol = 1e-9 * plan.dx;
  for (double p : pinned) {
    auto it = std::lower_bound(points.begin(), points.end(), p - tol);
    if (it != points.end() && std::abs(*it - p) <= tol) {
      *it = p;
    } else {
      points.insert(it, p);
    }
  }
  plan.x = std::move(points);

  plan.segment.resize(plan.x.size() - 1, -1);
  for (std::size_t k = 0; k + 1 < plan.x.size(); ++k) {
    const double mid = 0.5 * (plan.x[k] + plan.x[k + 1]);
    for (std::size_t s = 0; s < scenario.segments.size(); ++s) {
      if (mid >= scenario.segments[s].x0 && mid <= scenario.segments[s].x1) {
        plan.segment[k] = static_cast<int>(s);
        break;
      }
    }
  }
  return plan;
}

std::vector<NodeAmplitudes> apply_fluctuations(const Scenario& scenario, std::uint64_t seed) {
  const MarchPlan plan = plan_march(scenario);
  std::vector<Eigen::Index> node_counts;
  for (const auto& seg : scenario.segments) node_counts.push_back(detuning_grid(seg).size());

  std::vector<NodeAmplitudes> cells(plan.segment.size());
  for (std::size_t k = 0; k < plan.segment.size(); ++k) {
    const int s = plan.segment[k];
    if (s < 0) continue;
    cells[k] = fluctuation_cell(scenario.segments[s], node_counts[s], seed, k);
  }
  return cells;
}

namespace {

struct Recorder {
  std::vector<bool> trace;  // per breakpoint
  std::multimap<std::size_t, std::size_t> stations;  // breakpoint -> request index
};

Recorder plan_records(const Scenario& scenario, const MarchPlan& plan) {
  Recorder rec;
  const std::size_t points = plan.x.size();
  const std::size_t stride = std::max<std::size_t>(
      1, (points - 1 + scenario.record.dense_stations - 1) / scenario.record.dense_stations);
  rec.trace.assign(points, false);
  for (std::size_t k = 0; k < points; k += stride) rec.trace[k] = true;
  rec.trace.back() = true;
  for (std::size_t r = 0; r < scenario.record.stations.size(); ++r) {
    const double s = scenario.record.stations[r];
    auto it = std::min_element(plan.x.begin(), plan.x.end(),
                               [s](double a, double b) { return std::abs(a - s) < std::abs(b - s); });
    const auto k = static_cast<std::size_t>(it - plan.x.begin());
    rec.stations.emplace(k, r);
    rec.trace[k] = true;
  }
  return rec;
}

void record(SimulationResult& result, const Recorder& rec, std::size_t k, double x, const Field& omega) {
  if (rec.trace[k]) result.trace.push_back({x, omega});
  auto [lo, hi] = rec.stations.equal_range(k);
  for (auto it = lo; it != hi; ++it) result.stations[it->second] = {x, omega};
}

double medium_start(const Scenario& s) { return s.segments.empty() ? 0.0 : s.segments.front().x0; }
double medium_end(const Scenario& s) { return s.segments.empty() ? 0.0 : s.segments.back().x1; }

}  // namespace

SimulationResult run(const Scenario& scenario) {
  scenario.validate();
  const MarchPlan plan = plan_march(scenario);
  const Recorder rec = plan_records(scenario, plan);
  const std::vector<NodeAmplitudes> cells = apply_fluctuations(scenario, scenario.fluct_seed);
  std::vector<DetuningGrid> grids;
  for (const auto& seg : scenario.segments) grids.push_back(detuning_grid(seg));

  SimulationResult result;
  result.scenario = scenario;
  result.grid = scenario.grid;
  result.grid.dx = plan.dx;
  result.xi = scenario.grid.xi();
  result.stations.resize(scenario.record.stations.size());

  const PulseSpec& pulse = scenario.pulse;
  Eigen::Index front = 0;
  if (pulse.truncated()) {
    const double edge = pulse.front() - 1e-12 * pulse.tau;
    while (front < result.xi.size() && result.xi(front) < edge) ++front;
  }

  SolverState state;
  state.x = plan.x.front();
  state.omega = input_field(pulse, result.xi);
  const double peak_scale = pulse.amplitude;
  const Eigen::Index guard = static_cast<Eigen::Index>(std::ceil(pulse.tau / scenario.grid.d_xi));
  record(result, rec, 0, state.x, state.omega);

  for (std::size_t k = 0; k + 1 < plan.x.size(); ++k) {
    const int s = plan.segment[k];
    const double dx = plan.x[k + 1] - plan.x[k];
    if (s < 0) {
      state.g = 0.0;
      state.x = plan.x[k + 1];
    } else {
      state.g = scenario.segments[s].g;
      state.grid = grids[s];
      state.atoms = cells[k];
      state = advance_x(state, dx, scenario.grid.d_xi, cells[k], scenario.threads,
                        &result.stats.max_norm_deviation);
      state.x = plan.x[k + 1];

      // The first sample never changes (no coherence yet), so overflow shows as
      // the maximum entering the first tau of the window.
      const RealArray magnitude = state.omega.abs();
      Eigen::Index arg = 0;
      const double peak = magnitude.maxCoeff(&arg);
      if (peak > 1e-9 * peak_scale && arg < guard)
        throw WindowOverflow("run: field maximum reached the start of the xi window at x = " +
                                 std::to_string(plan.x[k]) + " cm",
                             plan.x[k]);
      result.stats.max_abs_imag = std::max(result.stats.max_abs_imag, state.omega.imag().abs().maxCoeff());
      if (front > 0)
        result.stats.max_front_leakage =
            std::max(result.stats.max_front_leakage, magnitude.head(front).maxCoeff());
    }
    ++result.stats.steps;
    record(result, rec, k + 1, state.x, state.omega);
  }

  for (double t : scenario.record.times) result.lab.push_back(lab_frame_snapshot(result, t));
  return result;
}

FieldSnapshot lab_frame_snapshot(const SimulationResult& result, double t) {
  if (result.trace.empty()) throw DomainError("lab_frame_snapshot: result has no recorded stations");
  const SimGrid& grid = result.grid;
  const Eigen::Index last = result.xi.size() - 1;
  const double tol = 1e-9 * grid.d_xi;

  FieldSnapshot snap;
  snap.t = t;
  snap.tau = result.scenario.pulse.tau;
  snap.medium_x0 = medium_start(result.scenario);
  snap.medium_x1 = medium_end(result.scenario);
  const auto n = static_cast<Eigen::Index>(result.trace.size());
  snap.x.resize(n);
  snap.omega.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& station = result.trace[i];
    const double xi = t - station.x / kSpeedOfLight;
    if (xi < grid.xi_min - tol || xi > grid.xi_max + tol)
      throw DomainError("lab_frame_snapshot: t = " + std::to_string(t) +
                        " ns maps outside the recorded xi window at x = " + std::to_string(station.x));
    const double pos = std::clamp((xi - grid.xi_min) / grid.d_xi, 0.0, static_cast<double>(last));
    const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), last - 1);
    const double frac = pos - static_cast<double>(k);
    snap.x(i) = station.x;
    snap.omega(i) = (1.0 - frac) * station.omega(k) + frac * station.omega(k + 1);
  }
  return snap;
}

SimulationResult analytic_replay(const AnalyticScenario& analytic, const Scenario& scenario) {
  const MarchPlan plan = plan_march(scenario);
  const Recorder rec = plan_records(scenario, plan);
  SimulationResult result;
  result.scenario = scenario;
  result.grid = scenario.grid;
  result.grid.dx = plan.dx;
  result.xi = scenario.grid.xi();
  result.stations.resize(scenario.record.stations.size());
  for (std::size_t k = 0; k < plan.x.size(); ++k) {
    if (!rec.trace[k] && rec.stations.count(k) == 0) continue;
    const double x = plan.x[k];
    Field omega(result.xi.size());
    for (Eigen::Index i = 0; i < result.xi.size(); ++i)
      omega(i) = analytic_field(analytic, x, result.xi(i) + x / kSpeedOfLight);
    record(result, rec, k, x, omega);
  }
  for (double t : scenario.record.times) result.lab.push_back(lab_frame_snapshot(result, t));
  return result;
}

}  // namespace fastlight
