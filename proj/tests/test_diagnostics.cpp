#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fastlight/config.hpp"
#include "fastlight/diagnostics.hpp"

using namespace fastlight;

namespace {

// 4 atan(e^W) - 4 atan(e^-W) for W = 25, from the sech antiderivative.
constexpr double kTruncatedArea = 6.283185307068483;

Scenario vacuum_scenario() {
  Scenario sc;
  sc.pulse = PulseSpec::sech(0.1, 25.0);
  sc.grid = default_grid(sc.pulse, {}, 0.0, 30.0);
  sc.record.stations = {30.0};
  return sc;
}

Scenario slab_scenario(bool sharp) {
  MediumSegment m;
  m.x0 = 0.0;
  m.x1 = slab_length(266.0, 0.733, 250.0);
  m.g = 266.0;
  m.t2star = sharp ? kInf : 0.733;
  Scenario sc;
  sc.pulse = PulseSpec::sech(0.1);
  sc.segments = {m};
  sc.grid = default_grid(sc.pulse, sc.segments, -10.0, m.x1 + 10.0);
  sc.record.stations = {m.x1 + 10.0};
  return sc;
}

}  // namespace

TEST_CASE("pulse area") {
  CHECK(pulse_area(Field::Zero(100), 0.01).theta == 0.0);
  const Scenario sc = vacuum_scenario();
  const RealArray xi = sc.grid.xi();
  const PulseArea a = pulse_area(input_field(sc.pulse, xi), sc.grid.d_xi);
  CHECK(std::abs(a.theta - kTruncatedArea) < 1e-10);
  CHECK(a.magnitude == doctest::Approx(a.theta));

  const PulseSpec full = PulseSpec::sech(0.1);
  const SimGrid g = default_grid(full, {}, 0.0, 1.0);
  CHECK(std::abs(pulse_area(input_field(full, g.xi()), g.d_xi).theta - 2.0 * std::numbers::pi) < 1e-6);
}

TEST_CASE("leading peak") {
  const RealArray xi = RealArray::LinSpaced(2001, -5.0, 5.0);
  CHECK_FALSE(leading_peak(Field::Zero(xi.size()), xi, 1e-9).has_value());

  // A smaller early peak above half amplitude wins over the global maximum.
  Field two(xi.size());
  for (Eigen::Index k = 0; k < xi.size(); ++k)
    two(k) = 0.8 / std::cosh((xi(k) + 2.0) / 0.1) + 1.0 / std::cosh((xi(k) - 1.0) / 0.1);
  auto p = leading_peak(two, xi, 1e-9);
  REQUIRE(p.has_value());
  CHECK(p->xi == doctest::Approx(-2.0).epsilon(1e-3));

  // An early bump below half amplitude is ignored.
  Field small(xi.size());
  for (Eigen::Index k = 0; k < xi.size(); ++k)
    small(k) = 0.3 / std::cosh((xi(k) + 2.0) / 0.1) + 1.0 / std::cosh((xi(k) - 1.0173) / 0.1);
  p = leading_peak(small, xi, 1e-9);
  REQUIRE(p.has_value());
  CHECK(std::abs(p->xi - 1.0173) < 1e-4);
  CHECK(p->amplitude == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("vacuum diagnostics") {
  const SimulationResult r = run(vacuum_scenario());
  const auto traj = peak_trajectory(r);
  REQUIRE(traj.size() == r.trace.size());
  for (const auto& p : traj) {
    REQUIRE(p.xi_peak.has_value());
    CHECK(*p.xi_peak == traj.front().xi_peak);
  }
  CHECK(fit_group_velocity(traj, 0.0, 30.0) == 1.0);
  CHECK(peak_advance(r) == 0.0);
  CHECK(front_causality_check(r, r.scenario.pulse.front()) == 0.0);

  const RingingMetrics ring = detect_ringing(r.exit().omega, r.xi, 0.0, 0.1);
  CHECK(ring.zero_crossings == 0);
  CHECK(ring.max_trailing_amp == doctest::Approx(1.0 / std::cosh(kTrailingOffsetTau)).epsilon(1e-9));

  const Metrics m = compute_metrics(r);
  CHECK(m.area_in == m.area_out);
  CHECK(m.advance_tau == 0.0);
  CHECK(m.front_leakage == 0.0);
  CHECK(m.max_imag_rel == 0.0);
  CHECK_FALSE(m.linf_vs_analytic.has_value());
}

TEST_CASE("group velocity fit") {
  std::vector<TrajectoryPoint> superluminal;
  for (int k = 0; k <= 20; ++k) superluminal.push_back({0.5 * k, -0.5 * k / kSpeedOfLight});
  CHECK(std::isinf(fit_group_velocity(superluminal, 0.0, 10.0)));

  std::vector<TrajectoryPoint> few = {{0.0, 0.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(fit_group_velocity(few, 0.0, 1.0), DomainError);

  for (bool sharp : {true, false}) {
    CAPTURE(sharp);
    const Scenario sc = slab_scenario(sharp);
    const AnalyticScenario s = make_analytic_scenario(sc.pulse, sc.segments.front());
    const SimulationResult r = analytic_replay(s, sc);
    const auto traj = peak_trajectory(r);
    const double vg = fit_group_velocity(traj, s.medium.x0, s.medium.x1);
    CHECK(vg == doctest::Approx(s.vg_over_c).epsilon(1e-4));
    CHECK(std::abs(vg / (sharp ? -3.0303 : -3.27) - 1.0) < (sharp ? 0.02 : 0.03));
    CHECK(peak_advance(r) == doctest::Approx(s.phi1 / 0.1).epsilon(1e-4));

    const AnalyticComparison self = compare_to_analytic(r, s, ComparisonMode::Loose);
    CHECK(self.linf == 0.0);
    CHECK(self.l2 == 0.0);
    CHECK(detect_ringing(r.exit().omega, r.xi, analytic_peak_time(s, r.exit().x) - r.exit().x / kSpeedOfLight,
                         0.1)
              .zero_crossings == 0);
  }
}

TEST_CASE("comparison guards") {
  Scenario sc = slab_scenario(false);
  const AnalyticScenario s = make_analytic_scenario(sc.pulse, sc.segments.front());
  const SimulationResult r = analytic_replay(s, sc);
  CHECK_THROWS_AS(compare_to_analytic(r, s, ComparisonMode::Strict), UnsupportedConfiguration);
  MediumSegment other = sc.segments.front();
  other.g = 100.0;
  other.t2star = kInf;
  CHECK_THROWS_AS(compare_to_analytic(r, make_analytic_scenario(sc.pulse, other)), DomainError);
}

TEST_CASE("numerical broadened slab tracks the dispersion group velocity") {
  // Untruncated input at coarse resolution; the leading peak moves at the
  // dispersion-relation speed inside the slab.
  nlohmann::json tree = *preset("slab_untruncated");
  set_config_value(tree, "grid.d_xi_ns", 0.1 / 20.0);
  LoadedConfig config = parse_config_json(tree);
  const double range = config.scenario.grid.x_max - config.scenario.grid.x_min;
  config.scenario.grid.dx = range / std::round(0.5 * range / auto_dx(config.scenario));
  const SimulationResult r = run(config.scenario);
  const Metrics m = compute_metrics(r);
  REQUIRE(m.vg_fit_over_c.has_value());
  CHECK(std::abs(*m.vg_fit_over_c / -3.27 - 1.0) < 0.03);
  REQUIRE(m.advance_tau.has_value());
  CHECK(*m.advance_tau > 10.0);
  CHECK(*m.advance_tau < 25.0);
  CHECK(m.max_imag_rel < 1e-10);
}

TEST_CASE("pulse area follows the area theorem in a broadened amplifier") {
  // tan(theta/2) = tan(theta0/2) exp(alpha L / 2) for an inverted inhomogeneous line.
  for (double theta0 : {0.4, 1.0, 2.0}) {
    CAPTURE(theta0);
    Scenario sc;
    sc.pulse = PulseSpec::sech(0.1, 25.0);
    sc.pulse.amplitude = theta0 / (std::numbers::pi * 0.1);
    MediumSegment m;
    m.g = 266.0;
    m.t2star = 0.733;
    m.x1 = 2.0 / beer_alpha(m.g, m.t2star);
    sc.segments = {m};
    sc.grid = default_grid(sc.pulse, sc.segments, 0.0, m.x1);
    const SimulationResult r = run(sc);
    const double expected = 2.0 * std::atan(std::tan(theta0 / 2.0) * std::exp(1.0));
    const double measured = pulse_area(r.exit().omega, r.grid.d_xi).theta;
    CHECK(measured == doctest::Approx(expected).epsilon(0.02));
  }
}
