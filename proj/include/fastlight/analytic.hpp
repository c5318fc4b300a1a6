#pragma once

#include <utility>
#include <vector>

#include "fastlight/model.hpp"

namespace fastlight {

/// Lab-frame field over x at a fixed time. Complex even when the source is real
/// so that analytic and numerical snapshots share one type.
struct FieldSnapshot {
  double t = 0.0;
  double tau = 0.0;
  RealArray x;
  Field omega;
  double medium_x0 = 0.0;  // shaded region for plotting
  double medium_x1 = 0.0;
};

/// Single-slab closed-form solution with its derived dispersion cached.
struct AnalyticScenario {
  PulseSpec pulse;
  MediumSegment medium;
  DetuningGrid grid;
  double one_minus_c_over_vg = 0.0;
  double vg_over_c = 1.0;
  double phi0 = 0.0;
  double phi1 = 0.0;

  double inverse_vg() const { return (1.0 - one_minus_c_over_vg) / kSpeedOfLight; }
};

/// Builds the scenario and its cache. The phases are taken from the same
/// group velocity as the interior branch so the field is continuous at x0, x1;
/// for a sharp line they equal phase_offsets() exactly.
AnalyticScenario make_analytic_scenario(const PulseSpec& pulse, const MediumSegment& medium);

enum class Branch { Before, Inside, After };

Branch branch_at(const AnalyticScenario& s, double x);

/// (2/tau) sech of the branch argument, evaluated on a chosen branch (extended
/// analytically past its own interval).
Complex branch_field(const AnalyticScenario& s, Branch branch, double x, double t);

Complex analytic_field(const AnalyticScenario& s, double x, double t);

struct AtomAmplitudes {
  Complex c1;
  Complex c2;
};

/// c1 = i sech(phi), c2 = -tanh(phi) inside the medium.
AtomAmplitudes analytic_amplitudes(const AnalyticScenario& s, double x, double t);

FieldSnapshot analytic_snapshot(const AnalyticScenario& s, double t, const RealArray& x_grid);

struct SamplePoint {
  double x;
  double t;
};

/// Max absolute residual of the Bloch and Maxwell equations for the closed
/// forms, by centred differences with time step `h` (and x step c h).
/// Sharp line only.
double residual_check(const AnalyticScenario& s, const std::vector<SamplePoint>& samples,
                      double h);

/// Lab time of the field maximum at fixed x, found by bracketing on the sign of
/// f(t + d) - f(t - d), which is exact for a symmetric unimodal profile.
double analytic_peak_time(const AnalyticScenario& s, double x);

/// Exit-plane advance in units of tau, from the closed form.
double analytic_peak_advance(const AnalyticScenario& s, double x_exit);

}  // namespace fastlight
