#include "fastlight/model.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>

namespace fastlight {

void PulseSpec::validate() const {
  if (!(tau > 0.0)) throw ConfigError("pulse.tau_ns", "must be > 0");
  if (!(amplitude > 0.0)) throw ConfigError("pulse.amplitude", "must be > 0");
  if (!(trunc_halfwidth > 0.0)) throw ConfigError("pulse.trunc_halfwidth", "must be > 0");
  if (!std::isfinite(t_peak)) throw ConfigError("pulse.t_peak_ns", "must be finite");
  if (const auto* ramp = std::get_if<CosineRamp>(&edge)) {
    if (!(ramp->ramp_len > 0.0)) throw ConfigError("pulse.ramp_len", "must be > 0");
    if (ramp->ramp_len > trunc_halfwidth)
      throw ConfigError("pulse.ramp_len", "must not exceed trunc_halfwidth");
  }
}

void MediumSegment::validate() const {
  if (!(x1 > x0)) throw ConfigError("x1_cm", "must exceed x0_cm");
  if (!(g >= 0.0)) throw ConfigError("g_ns2", "must be >= 0");
  if (!(t2star > 0.0)) throw ConfigError("t2star_ns", "must be > 0 or \"sharp\"");
  if (n_detuning < 1 || n_detuning % 2 == 0)
    throw ConfigError("n_detuning", "must be a positive odd integer");
  if (!(fluct_eps0 >= 0.0)) throw ConfigError("fluct_eps0", "must be >= 0");
  const double norm = std::norm(init_c1) + std::norm(init_c2);
  if (std::abs(norm - 1.0) > 1e-12)
    throw ConfigError("init_c1", "initial amplitudes must be normalized");
}

namespace {

// Orthonormal Hermite functions at x; returns (p_n, p_{n-1}).
std::pair<double, double> hermite_pair(int n, double x) {
  double p1 = 1.0 / std::pow(std::numbers::pi, 0.25);
  double p2 = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = x * std::sqrt(2.0 / j) * p2 - std::sqrt(static_cast<double>(j - 1) / j) * p3;
  }
  return {p1, p2};
}

}  // namespace

DetuningGrid gauss_hermite_grid(double t2star, int n) {
  if (n < 1 || n % 2 == 0)
    throw DomainError("gauss_hermite_grid: node count must be odd, got " + std::to_string(n));
  if (!(t2star > 0.0)) throw DomainError("gauss_hermite_grid: t2star must be > 0");
  if (!std::isfinite(t2star) || n == 1) return DetuningGrid::sharp_line();

  // Golub-Welsch for starting values, then Newton polish on the recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
  RealArray roots = eig.eigenvalues().array();
  RealArray weights(n);

  for (int i = 0; i < n; ++i) {
    double x = roots(i);
    double derivative = 0.0;
    for (int iter = 0; iter < 20; ++iter) {
      const auto [pn, pn1] = hermite_pair(n, x);
      derivative = std::sqrt(2.0 * n) * pn1;
      const double step = pn / derivative;
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    const auto [pn, pn1] = hermite_pair(n, x);
    derivative = std::sqrt(2.0 * n) * pn1;
    roots(i) = x;
    weights(i) = 2.0 / (derivative * derivative);  // weight function exp(-u^2)
  }

  std::sort(roots.begin(), roots.end());
  // Exact mirror symmetry and a zero centre node.
  const int mid = n / 2;
  for (int i = 0; i < mid; ++i) {
    const double u = 0.5 * (roots(n - 1 - i) - roots(i));
    const double w = 0.5 * (weights(i) + weights(n - 1 - i));
    roots(i) = -u;
    roots(n - 1 - i) = u;
    weights(i) = weights(n - 1 - i) = w;
  }
  roots(mid) = 0.0;

  DetuningGrid grid;
  grid.nodes = std::sqrt(2.0) * roots / t2star;
  grid.weights = weights / weights.sum();
  return grid;
}

GroupVelocity group_velocity(double g, double tau, const DetuningGrid& grid) {
  if (!(tau > 0.0)) throw DomainError("group_velocity: tau must be > 0");
  const double inv_tau2 = 1.0 / (tau * tau);
  const double integral = (grid.weights / (grid.nodes.square() + inv_tau2)).sum();
  const double one_minus = 0.5 * g * integral;
  if (std::abs(1.0 - one_minus) < 1e-9)
    throw DomainError("group_velocity: singular (1 - c/v_g = 1, |v_g| infinite)");
  return {one_minus, 1.0 / (1.0 - one_minus)};
}

}  // namespace fastlight
