#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fastlight/analytic.hpp"
#include "fastlight/metrics.hpp"
#include "fastlight/solver.hpp"

namespace fastlight {

struct PulseArea {
  double theta = 0.0;  // trapezoid integral of Re(Omega)
  double magnitude = 0.0;  // |integral of Omega|
};

PulseArea pulse_area(const Field& omega, double d_xi);

struct Peak {
  Eigen::Index index = 0;  // discrete argmax
  double xi = 0.0;  // parabolic refinement
  double amplitude = 0.0;
};

/// The leading pulse: the first local maximum of |Omega|^2 that reaches half of
/// the global maximum, refined by a three-point parabola. Empty when the field
/// is flat (max below `floor`).
std::optional<Peak> leading_peak(const Field& omega, const RealArray& xi, double floor);

/// Leading-peak position per trace station.
std::vector<TrajectoryPoint> peak_trajectory(const SimulationResult& result);

/// Least-squares slope of xi_peak(x) on [x_lo, x_hi] converted to v_g / c.
/// Returns +inf when the slope equals -1/c.
double fit_group_velocity(const std::vector<TrajectoryPoint>& trajectory, double x_lo, double x_hi);

/// (input xi_peak - exit xi_peak) / tau.
double peak_advance(const SimulationResult& result);

struct AnalyticComparison {
  double linf = 0.0;
  double l2 = 0.0;
};

enum class ComparisonMode { Strict, Loose };

/// Exit-plane difference to the closed form, normalized by 2/tau.
AnalyticComparison compare_to_analytic(const SimulationResult& result, const AnalyticScenario& analytic,
                                       ComparisonMode mode = ComparisonMode::Strict);

/// Start of the trailing region, in units of tau after the peak.
inline constexpr double kTrailingOffsetTau = 5.0;

RingingMetrics detect_ringing(const Field& omega, const RealArray& xi, double peak_xi, double tau);

/// max |Omega| at xi < front_xi over every recorded station, relative to 2/tau.
double front_causality_check(const SimulationResult& result, double front_xi);

/// Fills every Metrics field that the run supports.
Metrics compute_metrics(const SimulationResult& result);

}  // namespace fastlight
