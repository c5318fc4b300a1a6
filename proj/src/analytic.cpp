#include "fastlight/analytic.hpp"

#include <algorithm>

#include "fastlight/sech.hpp"

namespace fastlight {

AnalyticScenario make_analytic_scenario(const PulseSpec& pulse, const MediumSegment& medium) {
  pulse.validate();
  medium.validate();
  if (std::abs(pulse.amplitude * pulse.tau - 2.0) > 1e-12)
    throw ConfigError("pulse.amplitude", "closed-form solution requires amplitude = 2/tau");

  AnalyticScenario s;
  s.pulse = pulse;
  s.pulse.trunc_halfwidth = kInf;
  s.pulse.edge = HardEdge{};
  s.medium = medium;
  s.grid = detuning_grid(medium);
  const GroupVelocity gv = group_velocity(medium.g, pulse.tau, s.grid);
  s.one_minus_c_over_vg = gv.one_minus_c_over_vg;
  s.vg_over_c = gv.vg_over_c;
  if (s.grid.sharp()) {
    const PhaseOffsets ph = phase_offsets(medium.g, pulse.tau, medium.x0, medium.x1);
    s.phi0 = ph.phi0;
    s.phi1 = ph.phi1;
  } else {
    s.phi0 = -medium.x0 * s.one_minus_c_over_vg / kSpeedOfLight;
    s.phi1 = (medium.x1 - medium.x0) * s.one_minus_c_over_vg / kSpeedOfLight;
  }
  return s;
}

Branch branch_at(const AnalyticScenario& s, double x) {
  if (x < s.medium.x0) return Branch::Before;
  if (x > s.medium.x1) return Branch::After;
  return Branch::Inside;
}

namespace {

double branch_argument(const AnalyticScenario& s, Branch branch, double x, double t) {
  const double t_rel = t - s.pulse.t_peak;
  switch (branch) {
    case Branch::Before:
      return (t_rel - x / kSpeedOfLight) / s.pulse.tau;
    case Branch::Inside:
      return (t_rel - x * s.inverse_vg() + s.phi0) / s.pulse.tau;
    case Branch::After:
      return (t_rel - x / kSpeedOfLight + s.phi1) / s.pulse.tau;
  }
  return 0.0;
}

}  // namespace

Complex branch_field(const AnalyticScenario& s, Branch branch, double x, double t) {
  return {2.0 / s.pulse.tau * sech(branch_argument(s, branch, x, t)), 0.0};
}

Complex analytic_field(const AnalyticScenario& s, double x, double t) {
  return branch_field(s, branch_at(s, x), x, t);
}

AtomAmplitudes analytic_amplitudes(const AnalyticScenario& s, double x, double t) {
  if (x < s.medium.x0 || x > s.medium.x1)
    throw DomainError("analytic_amplitudes: x lies outside the medium");
  const double phi = branch_argument(s, Branch::Inside, x, t);
  return {Complex(0.0, sech(phi)), Complex(-std::tanh(phi), 0.0)};
}

FieldSnapshot analytic_snapshot(const AnalyticScenario& s, double t, const RealArray& x_grid) {
  if (!std::is_sorted(x_grid.begin(), x_grid.end()))
    throw DomainError("analytic_snapshot: x grid must be sorted ascending");
  FieldSnapshot snap;
  snap.t = t;
  snap.tau = s.pulse.tau;
  snap.x = x_grid;
  snap.omega = Field(x_grid.size());
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) snap.omega(i) = analytic_field(s, x_grid(i), t);
  snap.medium_x0 = s.medium.x0;
  snap.medium_x1 = s.medium.x1;
  return snap;
}

double residual_check(const AnalyticScenario& s, const std::vector<SamplePoint>& samples,
                      double h) {
  if (!s.grid.sharp())
    throw UnsupportedConfiguration(
        "residual_check: closed-form amplitudes are exact only for a sharp line");
  if (!(h > 0.0)) throw DomainError("residual_check: step must be > 0");

  const Complex i{0.0, 1.0};
  const double c = kSpeedOfLight;
  const double hx = c * h;
  double worst = 0.0;
  for (const auto& p : samples) {
    const Branch b = branch_at(s, p.x);
    const bool atoms = b == Branch::Inside && s.medium.g > 0.0;
    auto field = [&](double x, double t) { return branch_field(s, b, x, t); };

    const Complex dfield_dx = (field(p.x + hx, p.t) - field(p.x - hx, p.t)) / (2.0 * hx);
    const Complex dfield_dt = (field(p.x, p.t + h) - field(p.x, p.t - h)) / (2.0 * h);
    Complex maxwell = c * dfield_dx + dfield_dt;
    if (atoms) {
      const AtomAmplitudes a = analytic_amplitudes(s, p.x, p.t);
      maxwell += i * s.medium.g * a.c1 * std::conj(a.c2);
    }
    worst = std::max(worst, std::abs(maxwell));
    if (!atoms) continue;

    // Bloch equations at Delta = 0; stencil may step past x1 in t only, which
    // the interior branch formula handles.
    auto amps = [&](double t) {
      const double phi = branch_argument(s, Branch::Inside, p.x, t);
      return AtomAmplitudes{Complex(0.0, sech(phi)), Complex(-std::tanh(phi), 0.0)};
    };
    const AtomAmplitudes a = amps(p.t);
    const AtomAmplitudes ap = amps(p.t + h);
    const AtomAmplitudes am = amps(p.t - h);
    const Complex omega = field(p.x, p.t);
    const Complex r1 = (ap.c1 - am.c1) / (2.0 * h) - i * 0.5 * omega * a.c2;
    const Complex r2 = (ap.c2 - am.c2) / (2.0 * h) - i * 0.5 * std::conj(omega) * a.c1;
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  return worst;
}

double analytic_peak_time(const AnalyticScenario& s, double x) {
  const double tau = s.pulse.tau;
  const double drift = std::abs(x - s.medium.x0) * std::abs(s.one_minus_c_over_vg) / kSpeedOfLight;
  const double centre = s.pulse.t_peak + x / kSpeedOfLight;
  double lo = centre - drift - std::abs(s.phi1) - 30.0 * tau;
  double hi = centre + drift + std::abs(s.phi1) + 30.0 * tau;
  const double d = 0.25 * tau;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double rise = std::abs(analytic_field(s, x, mid + d)) - std::abs(analytic_field(s, x, mid - d));
    if (rise > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double analytic_peak_advance(const AnalyticScenario& s, double x_exit) {
  const double x_ref = s.medium.x0 - 1.0;
  const double xi_ref = analytic_peak_time(s, x_ref) - x_ref / kSpeedOfLight;
  const double xi_exit = analytic_peak_time(s, x_exit) - x_exit / kSpeedOfLight;
  return (xi_ref - xi_exit) / s.pulse.tau;
}

}  // namespace fastlight
