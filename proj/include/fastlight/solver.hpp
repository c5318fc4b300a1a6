#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fastlight/analytic.hpp"
#include "fastlight/metrics.hpp"
#include "fastlight/model.hpp"

namespace fastlight {

/// Retarded-time window (xi = t - x/c) and spatial march window.
struct SimGrid {
  double xi_min = 0.0;
  double xi_max = 0.0;
  double d_xi = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  std::optional<double> dx;  // empty: chosen by the step controller

  Eigen::Index xi_steps() const;
  RealArray xi() const;
  void validate() const;

  bool operator==(const SimGrid&) const = default;
};

struct RecordRequest {
  std::vector<double> times;  // lab-frame snapshot times, ns
  std::vector<double> stations;  // retarded-frame stations, cm
  int dense_stations = 400;  // target size of the x trace used by diagnostics

  bool operator==(const RecordRequest&) const = default;
};

struct Scenario {
  PulseSpec pulse;
  std::vector<MediumSegment> segments;
  SimGrid grid;
  std::uint64_t fluct_seed = 0;
  RecordRequest record;
  int threads = 1;

  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// Default window [t_peak - (W+5) tau, t_peak + (W+20) tau + phi1 estimate], step tau/40.
SimGrid default_grid(const PulseSpec& pulse, const std::vector<MediumSegment>& segments,
                     double x_min, double x_max);

/// Net peak advance (ns) over all segments, from the detuning-averaged group velocity.
double advance_estimate(const PulseSpec& pulse, const std::vector<MediumSegment>& segments);

/// dx satisfying g dx/c max|P| <= 0.05 with |P| <= 1/2, rounded to tile the x window.
double auto_dx(const Scenario& scenario);

using Amplitudes = Eigen::Vector2cd;  // (c1, c2)

/// Initial atomic amplitudes for every detuning node of one cell.
struct NodeAmplitudes {
  Field c1;
  Field c2;

  static NodeAmplitudes uniform(Eigen::Index nodes, Complex c1, Complex c2) {
    return {Field::Constant(nodes, c1), Field::Constant(nodes, c2)};
  }
};

struct SolverState {
  double x = 0.0;
  Field omega;
  double g = 0.0;  // 0 in vacuum
  DetuningGrid grid;
  NodeAmplitudes atoms;
};

struct RetardedSnapshot {
  double x = 0.0;
  Field omega;
};

struct RunStats {
  double max_norm_deviation = 0.0;
  double max_abs_imag = 0.0;  // 1/ns
  double max_front_leakage = 0.0;  // 1/ns, at xi before the input front
  long steps = 0;
};

struct SimulationResult {
  Scenario scenario;  // input echo, including seed
  SimGrid grid;  // with the resolved dx
  RealArray xi;
  std::vector<RetardedSnapshot> stations;  // requested, in request order
  std::vector<RetardedSnapshot> trace;  // dense, ascending x, includes x_min and x_max
  std::vector<FieldSnapshot> lab;  // requested times, in request order
  RunStats stats;
  std::optional<Metrics> metrics;

  const RetardedSnapshot& exit() const { return trace.back(); }
  const RetardedSnapshot& entry() const { return trace.front(); }
};

Complex input_envelope(const PulseSpec& pulse, double xi);
Field input_field(const PulseSpec& pulse, const RealArray& xi);

/// One RK4 step of the Bloch equations with the field linear in between the
/// two endpoint samples; the detuning phase is carried exactly by an integrating
/// factor. Checks normalization and finiteness.
Amplitudes bloch_step(const Amplitudes& c, Complex omega_start, Complex omega_end, double delta,
                      double d_xi);

/// sum_i w_i c1_i conj(c2_i), in ascending node order.
Complex polarization(const Field& c1, const Field& c2, const DetuningGrid& grid);

struct PolarizationTrace {
  Field p;
  double max_norm_deviation = 0.0;
};

/// Integrates every node over the whole xi grid from its initial amplitudes and
/// reduces the polarization. Node integrations run in parallel; the reduction
/// order is fixed.
PolarizationTrace integrate_polarization(const Field& omega, double d_xi,
                                         const DetuningGrid& grid, const NodeAmplitudes& atoms,
                                         int threads = 1);

/// Heun step of dOmega/dx = -(i g / c) P from state.x to state.x + dx. `next_atoms`
/// are the initial amplitudes used for the predictor's re-integration.
SolverState advance_x(const SolverState& state, double dx, double d_xi,
                      const NodeAmplitudes& next_atoms, int threads = 1,
                      double* max_norm_deviation = nullptr);

/// Random initial coherence for one cell: tip angle ~ N(0, eps0), phase ~ U[0, 2pi).
NodeAmplitudes fluctuation_cell(const MediumSegment& segment, Eigen::Index nodes,
                                std::uint64_t seed, std::uint64_t cell);

struct MarchPlan {
  std::vector<double> x;  // breakpoints, ascending
  std::vector<int> segment;  // per step (x[k], x[k+1]); -1 for vacuum
  double dx = 0.0;
};

MarchPlan plan_march(const Scenario& scenario);

/// Per-(x-cell, node) initial amplitudes; empty entries for vacuum cells.
std::vector<NodeAmplitudes> apply_fluctuations(const Scenario& scenario, std::uint64_t seed);

SimulationResult run(const Scenario& scenario);

/// Samples Omega(x, xi = t - x/c) on the trace stations, linear in xi.
FieldSnapshot lab_frame_snapshot(const SimulationResult& result, double t);

/// Replays the closed-form solution on the same stations and xi grid a run of
/// `scenario` would use.
SimulationResult analytic_replay(const AnalyticScenario& analytic, const Scenario& scenario);

}  // namespace fastlight
