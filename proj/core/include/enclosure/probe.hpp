#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "enclosure/field.hpp"
#include "enclosure/geometry.hpp"

namespace enclosure {

/// One exponential probe
///   v(x) = a * exp(-J/h) * exp(-(x.omega + i x.omega_perp - t) / h)
/// with omega_perp the +90 degree rotation of omega. `amplitude` is the real prefactor a
/// (1 for the standard test data).
struct ProbeParams {
  Vec2 omega;
  Vec2 omega_perp;
  double t = 0.0;
  double h = 0.2;
  double J = 5.5;
  int m = 2;
  double amplitude = 1.0;

  /// Validates |omega| = 1, h > 0, J > 0, m >= 2, amplitude > 0.
  static ProbeParams make(Vec2 omega, double t, double h, double J, int m, double amplitude = 1.0);

  /// The probe with omega_perp replaced by -omega_perp (pointwise complex conjugate of v).
  ProbeParams with_flipped_perp() const;
  ProbeParams with_amplitude(double a) const;
  ProbeParams with_t(double new_t) const;
};

/// Strict lower bound (3m - 1)/(m - 1) (B - b) on the gauge constant J.
double min_admissible_J(int m, double b, double B);

/// Closed form of the probe and its integer powers. Values are computed as
/// exp(log-modulus) * exp(i phase), never by powering sampled values.
class CalderonExponential {
 public:
  explicit CalderonExponential(const ProbeParams& probe) : probe_(probe) {}

  const ProbeParams& probe() const { return probe_; }
  /// ln|v(x)^k|
  double log_modulus(Vec2 x, int k = 1) const;
  /// v(x)^k
  Complex power(Vec2 x, int k) const;
  Complex operator()(Vec2 x) const { return power(x, 1); }

 private:
  ProbeParams probe_;
};

struct ProbeEvaluator {
  PointFunction interior;
  PointFunction boundary;
};

/// Interior and boundary evaluators of the probe; both are the same harmonic closed form.
ProbeEvaluator calderon_evaluator(const ProbeParams& probe);
/// Closed form of v^k, the harmonic extension of f^k.
PointFunction power_trace(const ProbeParams& probe, int k);

/// The probe adapted to the 5-point Laplacian of `grid`: the complex wavevector of v is moved
/// onto the discrete dispersion curve cosh(kx dx) + cosh(ky dx) = 2, so sampled values are
/// exactly discrete-harmonic. The weight standing in for f^m is a second discrete-harmonic
/// exponential whose phase is exactly m times the phase of v, which keeps v^m conj(weight) real
/// and positive. Both match the closed forms at the centre c of the grid's rectangle,
///   v_h(x) = v(c) exp(k'.(x - c)),
/// so the dependence on t is exact and quarter turns about c map probes onto each other.
/// The wavevector error is O(dx^2).
class GridHarmonicProbe {
 public:
  using Wavevector = std::array<Complex, 2>;

  GridHarmonicProbe(const ProbeParams& probe, const Grid& grid);

  const ProbeParams& probe() const { return probe_; }
  const Wavevector& wavevector() const { return k_; }
  const Wavevector& weight_wavevector() const { return k_weight_; }

  Complex operator()(Vec2 x) const;
  /// Discrete counterpart of f^m.
  Complex weight(Vec2 x) const;

 private:
  ProbeParams probe_;
  Vec2 anchor_;
  Wavevector k_;
  Wavevector k_weight_;
};

struct GuardResult {
  bool ok = true;
  std::string reason;
  /// Smallest h that passes the signal check for this (omega, t, J, m, amplitude).
  double limiting_h = 0.0;
  /// ln of the largest |v| over the domain.
  double log_max_modulus = 0.0;
  /// ln of the indicator signal scale a^(2m) exp(2m (t - b - J)/h).
  double log_signal = 0.0;
};

/// Magnitude bookkeeping for one probe against the scene's domain: rejects the J-rule violation,
/// t outside (b, B), and probes whose signal falls below 1e-280 or whose intermediates exceed
/// 1e+280.
GuardResult underflow_guard(const ProbeParams& probe, const Scene& scene);

/// Default h values: 1/h = 10/3, 4, 5, 6, 7, 8.
std::vector<double> default_h_grid();

}  // namespace enclosure
