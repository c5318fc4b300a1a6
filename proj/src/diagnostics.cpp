#include "fastlight/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fastlight {

PulseArea pulse_area(const Field& omega, double d_xi) {
  const Eigen::Index n = omega.size();
  if (n < 2) return {};
  const Complex integral = d_xi * (omega.sum() - 0.5 * (omega(0) + omega(n - 1)));
  return {integral.real(), std::abs(integral)};
}

std::optional<Peak> leading_peak(const Field& omega, const RealArray& xi, double floor) {
  const RealArray power = omega.abs2();
  const Eigen::Index n = power.size();
  if (n == 0) return std::nullopt;
  const double top = power.maxCoeff();
  if (!(top > floor * floor)) return std::nullopt;

  const double threshold = 0.25 * top;  // half the peak amplitude
  for (Eigen::Index k = 0; k < n; ++k) {
    if (power(k) < threshold) continue;
    const bool rises = k == 0 || power(k) > power(k - 1);
    const bool falls = k == n - 1 || power(k) >= power(k + 1);
    if (!rises || !falls) continue;

    Peak peak{k, xi(k), std::sqrt(power(k))};
    if (k > 0 && k < n - 1) {
      const double y0 = power(k - 1), y1 = power(k), y2 = power(k + 1);
      const double curvature = y0 - 2.0 * y1 + y2;
      if (curvature < 0.0) {
        const double shift = 0.5 * (y0 - y2) / curvature;
        peak.xi = xi(k) + shift * (xi(k + 1) - xi(k));
        peak.amplitude = std::sqrt(std::max(y1 - 0.25 * (y0 - y2) * shift, 0.0));
      }
    }
    return peak;
  }
  return std::nullopt;
}

namespace {

double peak_floor(const SimulationResult& result) { return 1e-9 * 2.0 / result.scenario.pulse.tau; }

}  // namespace

std::vector<TrajectoryPoint> peak_trajectory(const SimulationResult& result) {
  std::vector<TrajectoryPoint> out;
  out.reserve(result.trace.size());
  const double floor = peak_floor(result);
  for (const auto& station : result.trace) {
    TrajectoryPoint point{station.x, std::nullopt};
    if (auto peak = leading_peak(station.omega, result.xi, floor)) point.xi_peak = peak->xi;
    out.push_back(point);
  }
  return out;
}

double fit_group_velocity(const std::vector<TrajectoryPoint>& trajectory, double x_lo, double x_hi) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : trajectory) {
    if (p.xi_peak && p.x >= x_lo && p.x <= x_hi) pts.emplace_back(p.x, *p.xi_peak);
  }
  if (pts.size() < 10)
    throw DomainError("fit_group_velocity: need at least 10 trajectory points in range, have " +
                      std::to_string(pts.size()));
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double slope = sxy / sxx;  // ns/cm
  const double denom = kSpeedOfLight * slope + 1.0;
  if (std::abs(slope + 1.0 / kSpeedOfLight) < 1e-12) return std::numeric_limits<double>::infinity();
  return 1.0 / denom;
}

double peak_advance(const SimulationResult& result) {
  if (result.trace.empty()) throw DomainError("peak_advance: result has no stations");
  const double floor = peak_floor(result);
  const auto ref = leading_peak(result.entry().omega, result.xi, floor);
  const auto out = leading_peak(result.exit().omega, result.xi, floor);
  if (!ref || !out) throw DomainError("peak_advance: no identifiable peak at the entry or exit plane");
  return (ref->xi - out->xi) / result.scenario.pulse.tau;
}

namespace {

bool same_medium(const MediumSegment& a, const MediumSegment& b) {
  return a.x0 == b.x0 && a.x1 == b.x1 && a.g == b.g && a.t2star == b.t2star;
}

}  // namespace

AnalyticComparison compare_to_analytic(const SimulationResult& result, const AnalyticScenario& analytic,
                                       ComparisonMode mode) {
  if (mode == ComparisonMode::Strict && !analytic.grid.sharp())
    throw UnsupportedConfiguration("compare_to_analytic: strict mode requires a sharp line");
  const Scenario& s = result.scenario;
  if (s.segments.size() != 1 || !same_medium(s.segments.front(), analytic.medium) ||
      s.pulse.tau != analytic.pulse.tau || s.pulse.t_peak != analytic.pulse.t_peak)
    throw DomainError("compare_to_analytic: run and analytic scenario describe different setups");
  if (result.trace.empty()) throw DomainError("compare_to_analytic: result has no stations");

  const RetardedSnapshot& exit = result.exit();
  const double scale = 2.0 / analytic.pulse.tau;
  double linf = 0.0;
  double sum2 = 0.0;
  for (Eigen::Index k = 0; k < result.xi.size(); ++k) {
    const Complex reference = analytic_field(analytic, exit.x, result.xi(k) + exit.x / kSpeedOfLight);
    const double err = std::abs(exit.omega(k) - reference);
    linf = std::max(linf, err);
    sum2 += err * err;
  }
  return {linf / scale, std::sqrt(sum2 / static_cast<double>(result.xi.size())) / scale};
}

RingingMetrics detect_ringing(const Field& omega, const RealArray& xi, double peak_xi, double tau) {
  RingingMetrics out;
  const Eigen::Index n = omega.size();
  if (n == 0) return out;
  Eigen::Index k = 0;
  while (k < n - 1 && xi(k + 1) <= peak_xi) ++k;
  const double peak = std::max(std::abs(omega(k)), k + 1 < n ? std::abs(omega(k + 1)) : 0.0);
  if (!(peak > 0.0)) return out;

  const double noise = 1e-9 * peak;
  int sign = 0;
  for (Eigen::Index i = k; i < n; ++i) {
    const double re = omega(i).real();
    if (std::abs(re) <= noise) continue;
    const int s = re > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) ++out.zero_crossings;
    sign = s;
  }
  const double start = peak_xi + kTrailingOffsetTau * tau;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (xi(i) >= start) out.max_trailing_amp = std::max(out.max_trailing_amp, std::abs(omega(i)));
  }
  out.max_trailing_amp /= peak;
  return out;
}

double front_causality_check(const SimulationResult& result, double front_xi) {
  const double edge = front_xi - 1e-12 * result.scenario.pulse.tau;
  Eigen::Index front = 0;
  while (front < result.xi.size() && result.xi(front) < edge) ++front;
  double worst = 0.0;
  auto scan = [&](const RetardedSnapshot& s) {
    if (front > 0) worst = std::max(worst, s.omega.head(front).abs().maxCoeff());
  };
  for (const auto& s : result.trace) scan(s);
  for (const auto& s : result.stations) scan(s);
  return worst / (2.0 / result.scenario.pulse.tau);
}

Metrics compute_metrics(const SimulationResult& result) {
  Metrics m;
  const Scenario& s = result.scenario;
  const double tau = s.pulse.tau;
  const double d_xi = result.grid.d_xi;
  const double scale = 2.0 / tau;

  const PulseArea in = pulse_area(result.entry().omega, d_xi);
  const PulseArea out = pulse_area(result.exit().omega, d_xi);
  m.area_in = in.theta;
  m.area_in_abs = in.magnitude;
  m.area_out = out.theta;
  m.area_out_abs = out.magnitude;

  m.peak_trajectory = peak_trajectory(result);
  if (!s.segments.empty()) {
    const MediumSegment& seg = s.segments.front();
    try {
      m.vg_fit_over_c = fit_group_velocity(m.peak_trajectory, seg.x0, seg.x1);
    } catch (const DomainError&) {
    }
  }
  try {
    m.advance_tau = peak_advance(result);
  } catch (const DomainError&) {
  }

  if (s.segments.size() == 1 && std::abs(s.pulse.amplitude * tau - 2.0) < 1e-12) {
    const AnalyticScenario analytic = make_analytic_scenario(s.pulse, s.segments.front());
    const auto mode = analytic.grid.sharp() ? ComparisonMode::Strict : ComparisonMode::Loose;
    m.linf_vs_analytic = compare_to_analytic(result, analytic, mode).linf;
  }

  if (s.pulse.truncated()) {
    m.front_leakage = std::max(front_causality_check(result, s.pulse.front()),
                               result.stats.max_front_leakage / scale);
  }
  if (auto peak = leading_peak(result.exit().omega, result.xi, peak_floor(result)))
    m.ringing = detect_ringing(result.exit().omega, result.xi, peak->xi, tau);

  m.max_norm_deviation = result.stats.max_norm_deviation;
  m.max_imag_rel = std::max(result.stats.max_abs_imag, result.exit().omega.imag().abs().maxCoeff()) / scale;
  m.dx_cm = result.grid.dx.value_or(0.0);
  return m;
}

}  // namespace fastlight
