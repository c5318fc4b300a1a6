#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <variant>

#include <Eigen/Dense>

#include "fastlight/errors.hpp"

namespace fastlight {

// Internal units: time in ns, length in cm, rates in 1/ns.

using Complex = std::complex<double>;
using RealArray = Eigen::ArrayXd;
using Field = Eigen::ArrayXcd;

struct PhysicalConstants {
  static constexpr double c = 29.9792458;  // cm/ns
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double epsilon0 = 8.8541878128e-12;  // F/m
};

inline constexpr double kSpeedOfLight = PhysicalConstants::c;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct HardEdge {
  bool operator==(const HardEdge&) const = default;
};

/// Half-cosine taper over the outer `ramp_len` (units of tau) of each side.
struct CosineRamp {
  double ramp_len = 1.0;

  bool operator==(const CosineRamp&) const = default;
};

using EdgeProfile = std::variant<HardEdge, CosineRamp>;

/// Input probe envelope at the injection plane.
struct PulseSpec {
  double tau = 0.1;
  double amplitude = 20.0;  // peak Rabi frequency, 1/ns
  double t_peak = 0.0;
  double trunc_halfwidth = kInf;  // units of tau
  EdgeProfile edge = HardEdge{};

  /// A sech pulse of area 2 pi: amplitude = 2 / tau.
  static PulseSpec sech(double tau, double trunc_halfwidth = kInf, double t_peak = 0.0) {
    PulseSpec p;
    p.tau = tau;
    p.amplitude = 2.0 / tau;
    p.t_peak = t_peak;
    p.trunc_halfwidth = trunc_halfwidth;
    return p;
  }

  bool truncated() const { return std::isfinite(trunc_halfwidth); }
  double front() const { return t_peak - trunc_halfwidth * tau; }

  void validate() const;

  bool operator==(const PulseSpec&) const = default;
};

/// One slab of inverted two-level atoms.
struct MediumSegment {
  double x0 = 0.0;
  double x1 = 1.0;
  double g = 0.0;  // 1/ns^2
  double t2star = kInf;  // ns; infinite means a sharp line
  int n_detuning = 41;
  Complex init_c1{0.0, 0.0};
  Complex init_c2{1.0, 0.0};
  double fluct_eps0 = 0.0;

  bool sharp() const { return !std::isfinite(t2star); }
  double length() const { return x1 - x0; }

  void validate() const;

  bool operator==(const MediumSegment&) const = default;
};

/// Quadrature discretization of the normalized Gaussian detuning distribution.
/// Nodes are sorted ascending and exactly symmetric about zero.
struct DetuningGrid {
  RealArray nodes;
  RealArray weights;

  Eigen::Index size() const { return nodes.size(); }
  bool sharp() const { return nodes.size() == 1 && nodes(0) == 0.0; }

  static DetuningGrid sharp_line() {
    DetuningGrid grid;
    grid.nodes = RealArray::Zero(1);
    grid.weights = RealArray::Ones(1);
    return grid;
  }
};

struct GroupVelocity {
  double one_minus_c_over_vg;
  double vg_over_c;
};

struct PhaseOffsets {
  double phi0;  // ns
  double phi1;  // ns
};

/// Coupling g = N mu^2 omega / (epsilon0 hbar) in 1/ns^2.
/// N in m^-3, mu in C m, omega in rad/s.
template <typename Scalar>
Scalar coupling_constant(Scalar density, Scalar dipole, Scalar omega) {
  if (density < Scalar(0) || dipole < Scalar(0) || omega < Scalar(0))
    throw DomainError("coupling_constant: inputs must be non-negative");
  const Scalar per_s2 = density * dipole * dipole * omega /
                        (Scalar(PhysicalConstants::epsilon0) * Scalar(PhysicalConstants::hbar));
  return per_s2 * Scalar(1e-18);
}

/// Inverse Beer length sqrt(pi/2) g T2* / c, in 1/cm.
template <typename Scalar>
Scalar beer_alpha(Scalar g, Scalar t2star) {
  if (!std::isfinite(t2star))
    throw DomainError("beer_alpha: undefined for a sharp line (infinite t2star)");
  if (g < Scalar(0) || !(t2star > Scalar(0)))
    throw DomainError("beer_alpha: requires g >= 0 and t2star > 0");
  using std::sqrt;
  return sqrt(std::numbers::pi_v<Scalar> / Scalar(2)) * g * t2star / Scalar(kSpeedOfLight);
}

/// Long-T2* phase offsets of the segmented solution.
template <typename Scalar>
PhaseOffsets phase_offsets(Scalar g, Scalar tau, Scalar x0, Scalar x1) {
  if (x1 < x0) throw DomainError("phase_offsets: requires x1 >= x0");
  const Scalar k = tau * tau * g / (Scalar(2) * Scalar(kSpeedOfLight));
  return {static_cast<double>(-k * x0), static_cast<double>(k * (x1 - x0))};
}

/// Gauss-Hermite grid for F(Delta) with odd node count; infinite t2star gives the sharp line.
DetuningGrid gauss_hermite_grid(double t2star, int n);

/// Group velocity from the detuning-averaged dispersion; vg_over_c is signed.
GroupVelocity group_velocity(double g, double tau, const DetuningGrid& grid);

/// Convenience: the detuning grid a segment describes.
inline DetuningGrid detuning_grid(const MediumSegment& segment) {
  return gauss_hermite_grid(segment.t2star, segment.sharp() ? 1 : segment.n_detuning);
}

/// Slab length (cm) that is `absorption_lengths` Beer lengths deep.
inline double slab_length(double g, double t2star, double absorption_lengths) {
  return absorption_lengths / beer_alpha(g, t2star);
}

}  // namespace fastlight
