#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fastlight/analytic.hpp"

using namespace fastlight;

namespace {

MediumSegment slab(bool sharp, double g = 266.0) {
  MediumSegment m;
  m.x0 = 0.0;
  m.x1 = slab_length(266.0, 0.733, 250.0);
  m.g = g;
  m.t2star = sharp ? kInf : 0.733;
  return m;
}

AnalyticScenario scenario(bool sharp, double g = 266.0) {
  return make_analytic_scenario(PulseSpec::sech(0.1), slab(sharp, g));
}

}  // namespace

TEST_CASE("cached dispersion") {
  const AnalyticScenario sharp = scenario(true);
  CHECK(sharp.phi1 == doctest::Approx(1.36064897817678).epsilon(1e-12));
  CHECK(sharp.vg_over_c == doctest::Approx(1.0 / (1.0 - 1.33)).epsilon(1e-12));
  const AnalyticScenario broad = scenario(false);
  CHECK(broad.phi1 == doctest::Approx(1.33662180481971).epsilon(1e-6));
  CHECK(broad.vg_over_c == doctest::Approx(-3.26249323988598).epsilon(1e-6));
  CHECK_THROWS(make_analytic_scenario(PulseSpec{.tau = 0.1, .amplitude = 5.0}, slab(true)));
}

TEST_CASE("field continuity and peak") {
  for (bool sharp : {true, false}) {
    CAPTURE(sharp);
    const AnalyticScenario s = scenario(sharp);
    const double x1 = s.medium.x1;
    for (double t : {-0.3, 0.0, 0.2, 0.9, 1.4}) {
      CHECK(std::abs(branch_field(s, Branch::Before, 0.0, t) - branch_field(s, Branch::Inside, 0.0, t)) <
            1e-12);
      CHECK(std::abs(branch_field(s, Branch::Inside, x1, t) - branch_field(s, Branch::After, x1, t)) <
            1e-9);
    }
    CHECK(std::abs(analytic_field(s, -3.0, -3.0 / kSpeedOfLight) - Complex(20.0, 0.0)) < 1e-12);
    CHECK(branch_at(s, -1.0) == Branch::Before);
    CHECK(branch_at(s, 1.0) == Branch::Inside);
    CHECK(branch_at(s, x1 + 1.0) == Branch::After);

    // The exit peak precedes free propagation by phi1.
    const double t_exit = analytic_peak_time(s, x1);
    CHECK(t_exit == doctest::Approx(x1 / kSpeedOfLight - s.phi1).epsilon(1e-9));
    CHECK(analytic_peak_advance(s, x1 + 5.0) == doctest::Approx(s.phi1 / 0.1).epsilon(1e-6));
  }
}

TEST_CASE("medium amplitudes") {
  const AnalyticScenario s = scenario(true);
  const double x = 10.0;
  const double t_peak = analytic_peak_time(s, x);
  const AtomAmplitudes centre = analytic_amplitudes(s, x, t_peak);
  CHECK(std::abs(centre.c1 - Complex(0.0, 1.0)) < 1e-6);
  CHECK(std::abs(centre.c2) < 1e-6);
  const AtomAmplitudes before = analytic_amplitudes(s, x, t_peak - 5.0);
  CHECK(std::abs(before.c1) < 1e-12);
  CHECK(std::abs(before.c2 - Complex(1.0, 0.0)) < 1e-12);
  const AtomAmplitudes after = analytic_amplitudes(s, x, t_peak + 5.0);
  CHECK(std::abs(after.c1) < 1e-12);
  CHECK(std::abs(after.c2 - Complex(-1.0, 0.0)) < 1e-12);
  for (double t = t_peak - 1.0; t < t_peak + 1.0; t += 0.013) {
    const AtomAmplitudes a = analytic_amplitudes(s, x, t);
    CHECK(std::norm(a.c1) + std::norm(a.c2) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(analytic_amplitudes(s, -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(analytic_amplitudes(s, s.medium.x1 + 1.0, 0.0), DomainError);
}

TEST_CASE("snapshots") {
  const AnalyticScenario s = scenario(false);
  const RealArray x = RealArray::LinSpaced(801, -45.0, s.medium.x1 + 15.0);
  const FieldSnapshot early = analytic_snapshot(s, -2.0, x);
  double interior = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) >= s.medium.x0 && x(i) <= s.medium.x1) interior = std::max(interior, std::abs(early.omega(i)));
  CHECK(interior < 1e-6 * 20.0);

  for (double t : {-1.2, -0.6, -0.2, 0.6, 1.5}) {
    const FieldSnapshot snap = analytic_snapshot(s, t, x);
    CHECK(snap.t == t);
    CHECK(snap.medium_x1 == s.medium.x1);
    for (Eigen::Index i = 0; i < x.size(); i += 37) CHECK(snap.omega(i) == analytic_field(s, x(i), t));
  }
  RealArray unsorted = x;
  std::swap(unsorted(0), unsorted(1));
  CHECK_THROWS(analytic_snapshot(s, 0.0, unsorted));
}

TEST_CASE("closed forms satisfy the sharp-line equations") {
  const AnalyticScenario s = scenario(true);
  std::vector<SamplePoint> samples;
  for (double x : {2.0, 10.0, 20.0}) {
    const double tp = analytic_peak_time(s, x);
    for (double dt : {-0.15, -0.05, 0.0, 0.07, 0.2}) samples.push_back({x, tp + dt});
  }
  const double r1 = residual_check(s, samples, 1e-3);
  const double r2 = residual_check(s, samples, 5e-4);
  CHECK(r2 < r1);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(residual_check(s, samples, 1e-4) < 1e-2);

  // Free propagation.
  const AnalyticScenario vac = scenario(true, 0.0);
  CHECK(residual_check(vac, samples, 1e-3) < 1e-9);

  CHECK_THROWS_AS(residual_check(scenario(false), samples, 1e-3), UnsupportedConfiguration);
}
