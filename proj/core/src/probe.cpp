#include "enclosure/probe.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "enclosure/errors.hpp"

namespace enclosure {

namespace {

const double kLogSignalFloor = std::log(1e-280);
const double kLogOverflowCeiling = std::log(1e280);

}  // namespace

ProbeParams ProbeParams::make(Vec2 omega, double t, double h, double J, int m, double amplitude) {
  if (std::abs(norm(omega) - 1.0) > 1e-12) throw InvalidArgument("probe: omega must be a unit vector");
  if (!(h > 0.0)) throw InvalidArgument("probe: h must be positive");
  if (!(J > 0.0)) throw InvalidArgument("probe: J must be positive");
  if (m < 2) throw InvalidArgument("probe: m must be >= 2");
  if (!(amplitude > 0.0)) throw InvalidArgument("probe: amplitude must be positive");
  if (!std::isfinite(t)) throw InvalidArgument("probe: t must be finite");
  return ProbeParams{omega, rotate90(omega), t, h, J, m, amplitude};
}

ProbeParams ProbeParams::with_flipped_perp() const {
  ProbeParams p = *this;
  p.omega_perp = omega_perp * -1.0;
  return p;
}

ProbeParams ProbeParams::with_amplitude(double a) const {
  ProbeParams p = *this;
  p.amplitude = a;
  return p;
}

ProbeParams ProbeParams::with_t(double new_t) const {
  ProbeParams p = *this;
  p.t = new_t;
  return p;
}

double min_admissible_J(int m, double b, double B) {
  if (m < 2) throw InvalidArgument("min_admissible_J: m must be >= 2");
  if (!(B > b)) throw InvalidArgument("min_admissible_J: need B > b");
  return (3.0 * m - 1.0) / (m - 1.0) * (B - b);
}

double CalderonExponential::log_modulus(Vec2 x, int k) const {
  const auto& p = probe_;
  return k * (std::log(p.amplitude) - (p.J + dot(x, p.omega) - p.t) / p.h);
}

Complex CalderonExponential::power(Vec2 x, int k) const {
  const double phase = -k * dot(x, probe_.omega_perp) / probe_.h;
  return std::polar(std::exp(log_modulus(x, k)), phase);
}

ProbeEvaluator calderon_evaluator(const ProbeParams& probe) {
  const CalderonExponential v(probe);
  return {[v](Vec2 x) { return v(x); }, [v](Vec2 x) { return v(x); }};
}

PointFunction power_trace(const ProbeParams& probe, int k) {
  if (k < 1) throw InvalidArgument("power_trace: k must be >= 1");
  const CalderonExponential v(probe);
  return [v, k](Vec2 x) { return v.power(x, k); };
}

namespace {

// cosh(a dx) + cosh(b dx) - 2 without cancellation
Complex dispersion(const GridHarmonicProbe::Wavevector& k, double dx) {
  const Complex sa = std::sinh(0.5 * dx * k[0]);
  const Complex sb = std::sinh(0.5 * dx * k[1]);
  return 2.0 * (sa * sa + sb * sb);
}

constexpr int kMaxDispersionSteps = 60;

// k + delta conj(k) h with complex delta chosen by Newton; the direction conj(k) keeps the
// grid's reflection and quarter-turn symmetries
GridHarmonicProbe::Wavevector discrete_wavevector(const GridHarmonicProbe::Wavevector& k, double h,
                                                  double dx) {
  const Complex c0 = std::conj(k[0]) * h;
  const Complex c1 = std::conj(k[1]) * h;
  Complex delta = 0.0;
  for (int it = 0; it < kMaxDispersionSteps; ++it) {
    const GridHarmonicProbe::Wavevector kk{k[0] + delta * c0, k[1] + delta * c1};
    const Complex F = dispersion(kk, dx);
    const Complex dF = dx * (c0 * std::sinh(dx * kk[0]) + c1 * std::sinh(dx * kk[1]));
    const Complex step = F / dF;
    delta -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(delta)) || F == Complex(0.0))
      return {k[0] + delta * c0, k[1] + delta * c1};
  }
  throw NumericFailure("GridHarmonicProbe: dispersion solve did not converge");
}

// real part adjusted, imaginary part held fixed
GridHarmonicProbe::Wavevector discrete_weight_wavevector(Vec2 re, Vec2 im, double dx) {
  for (int it = 0; it < kMaxDispersionSteps; ++it) {
    const GridHarmonicProbe::Wavevector kk{Complex(re.x, im.x), Complex(re.y, im.y)};
    const Complex F = dispersion(kk, dx);
    const Complex a = dx * std::sinh(dx * kk[0]);
    const Complex b = dx * std::sinh(dx * kk[1]);
    const double det = a.real() * b.imag() - b.real() * a.imag();
    if (det == 0.0) break;
    const Vec2 step{(F.real() * b.imag() - b.real() * F.imag()) / det,
                    (a.real() * F.imag() - F.real() * a.imag()) / det};
    re = re - step;
    if (norm(step) <= 1e-15 * norm(re)) return {Complex(re.x, im.x), Complex(re.y, im.y)};
  }
  throw NumericFailure("GridHarmonicProbe: weight dispersion solve did not converge");
}

// c exp(k.y) with c given by ln|c| and arg c
Complex plane_wave(const GridHarmonicProbe::Wavevector& k, Vec2 y, double log_modulus, double phase) {
  const Complex e = k[0] * y.x + k[1] * y.y;
  return std::polar(std::exp(e.real() + log_modulus), e.imag() + phase);
}

}  // namespace

GridHarmonicProbe::GridHarmonicProbe(const ProbeParams& probe, const Grid& grid) : probe_(probe) {
  const Rect& r = grid.rect();
  anchor_ = {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)};
  const double h = probe.h;
  const double dx = grid.spacing();
  const Wavevector k{Complex(-probe.omega.x, -probe.omega_perp.x) / h,
                     Complex(-probe.omega.y, -probe.omega_perp.y) / h};
  k_ = discrete_wavevector(k, h, dx);
  const double m = probe.m;
  k_weight_ = discrete_weight_wavevector({m * k_[0].real(), m * k_[1].real()},
                                         {m * k_[0].imag(), m * k_[1].imag()}, dx);
}

Complex GridHarmonicProbe::operator()(Vec2 x) const {
  const CalderonExponential v(probe_);
  return plane_wave(k_, x - anchor_, v.log_modulus(anchor_, 1), -dot(anchor_, probe_.omega_perp) / probe_.h);
}

Complex GridHarmonicProbe::weight(Vec2 x) const {
  const CalderonExponential v(probe_);
  const int m = probe_.m;
  return plane_wave(k_weight_, x - anchor_, v.log_modulus(anchor_, m),
                    -m * dot(anchor_, probe_.omega_perp) / probe_.h);
}

GuardResult underflow_guard(const ProbeParams& p, const Scene& scene) {
  GuardResult g;
  const auto [b, B] = support_interval(scene, p.omega);
  const double m = p.m;
  const double log_a = std::log(p.amplitude);
  g.log_max_modulus = log_a + (p.t - b - p.J) / p.h;
  g.log_signal = 2.0 * m * g.log_max_modulus;
  // signal exponent 2m(log a + (t - b - J)/h) >= floor  <=>  h >= 2m(J - t + b) / (2m log a - floor)
  const double denom = 2.0 * m * log_a - kLogSignalFloor;
  const double gap = p.J - p.t + b;
  g.limiting_h = (gap > 0.0 && denom > 0.0) ? 2.0 * m * gap / denom : 0.0;

  const double j_min = min_admissible_J(p.m, b, B);
  if (!(p.J > j_min)) {
    g.ok = false;
    g.reason = fmt::format("J-rule violated: J = {} must exceed (3m-1)/(m-1)(B-b) = {}", p.J, j_min);
    return g;
  }
  if (!(p.t > b && p.t < B)) {
    g.ok = false;
    g.reason = fmt::format("t = {} outside (b, B) = ({}, {})", p.t, b, B);
    return g;
  }
  if (g.log_signal < kLogSignalFloor) {
    g.ok = false;
    g.reason = fmt::format("signal underflow: ln signal = {} below ln(1e-280); smallest admissible h = {}",
                           g.log_signal, g.limiting_h);
    return g;
  }
  // largest intermediate: |v|^(2m) at the minimizing boundary point, or |v| itself when |v| > 1
  const double log_largest = std::max({g.log_max_modulus, m * g.log_max_modulus, g.log_signal});
  if (log_largest > kLogOverflowCeiling) {
    g.ok = false;
    g.reason = fmt::format("overflow: ln of an intermediate = {} above ln(1e+280)", log_largest);
    return g;
  }
  return g;
}

std::vector<double> default_h_grid() { return {0.30, 0.25, 0.20, 1.0 / 6.0, 1.0 / 7.0, 0.125}; }

}  // namespace enclosure
