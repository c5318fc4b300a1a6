#pragma once

#include <optional>
#include <vector>

namespace fastlight {

struct TrajectoryPoint {
  double x = 0.0;
  std::optional<double> xi_peak;  // empty: no identifiable peak at this station
};

struct RingingMetrics {
  int zero_crossings = 0;
  double max_trailing_amp = 0.0;  // relative to the main peak
};

/// Scalar and trajectory diagnostics of one run. Serialized one-to-one into summary.json.
struct Metrics {
  double area_in = 0.0;  // int Re(Omega) dxi, radians
  double area_out = 0.0;
  double area_in_abs = 0.0;  // |int Omega dxi|
  double area_out_abs = 0.0;
  std::vector<TrajectoryPoint> peak_trajectory;
  std::optional<double> vg_fit_over_c;
  std::optional<double> advance_tau;
  std::optional<double> linf_vs_analytic;
  double front_leakage = 0.0;  // relative to 2/tau
  RingingMetrics ringing;
  double max_norm_deviation = 0.0;
  double max_imag_rel = 0.0;  // max |Im Omega| relative to 2/tau
  double dx_cm = 0.0;
};

}  // namespace fastlight
