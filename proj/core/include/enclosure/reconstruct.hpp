#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/indicator.hpp"

namespace enclosure {

enum class Verdict { Miss, Hit, Uncertain };

std::string to_string(Verdict v);

/// Terms besides A/h used to fit log_I(h):
///   none        c
///   log         c + p ln h
///   log_linear  c + p ln h + beta h
/// The extra terms absorb the algebraic prefactor of the indicator (Laplace-type decay of
/// the integral over D), which otherwise biases the 1/h slope at moderate h.
enum class PrefactorModel { none, log, log_linear };

std::string to_string(PrefactorModel m);
PrefactorModel prefactor_model_from_string(const std::string& s);

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();  ///< coefficient of 1/h
  double residual = 0.0;                                    ///< RMS fit residual
  int samples = 0;
  /// Model actually used; reduced when there are too few samples for the requested one.
  PrefactorModel model = PrefactorModel::none;
};

/// Least-squares fit of log_I against 1/h. Needs at least 3 samples with distinct h; the model is
/// reduced until at least one residual degree of freedom remains.
SlopeFit fit_log_indicator(std::span<const double> h, std::span<const double> log_I,
                           PrefactorModel model);

/// Default dead band 2m * 0.01 in slope units (|t - t*| >= 0.01 in projection units).
inline double default_dead_band(int m) { return 2.0 * m * 0.01; }

/// Everything needed to turn (omega, t) into a set of probes.
struct ProbePlan {
  int m = 2;
  double J = 5.5;
  double amplitude = 1.0;
  std::vector<double> h_grid;
  double dead_band = 0.04;
  PrefactorModel model = PrefactorModel::log_linear;
};

struct DroppedProbe {
  double h = 0.0;
  std::string reason;
};

struct Decision {
  Verdict verdict = Verdict::Uncertain;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double dead_band = 0.0;
  std::string reason;
  SlopeFit fit;
  std::vector<IndicatorSample> samples;
  std::vector<DroppedProbe> dropped;
};

/// Verdict from already evaluated samples: slope > +dead_band is Hit, slope < -dead_band is
/// Miss. Only resolved samples enter the fit; with none resolved out of >= 3 the indicator is
/// below the noise floor everywhere, which is reported as Miss.
Decision decide_from_samples(std::vector<IndicatorSample> samples, double dead_band,
                             PrefactorModel model);

/// Evaluates the probe family over plan.h_grid (guard-rejected h are dropped with a reason)
/// and classifies the half-space {x . omega <= t}.
Decision classify_halfspace(const IndicatorSource& source, Vec2 omega, double t, const ProbePlan& plan);

struct SupportFit {
  double t_hat = 0.0;
  double slope = 0.0;
  double residual = 0.0;
};

/// t_hat = t - slope / (2m), with the slope fitted from samples at threshold t.
SupportFit estimate_support_slope(Vec2 omega, double t, std::span<const IndicatorSample> samples,
                                  PrefactorModel model = PrefactorModel::log_linear);

class NoTransition : public Error {
 public:
  NoTransition(Verdict low, Verdict high);
  Verdict low_verdict;
  Verdict high_verdict;
};

struct BisectResult {
  double t_hat = 0.0;
  double low = 0.0;
  double high = 0.0;
  int evaluations = 0;
  std::vector<std::string> warnings;
  Decision last_hit;
};

/// Bisection on verdicts until the bracket is at most tol_t wide. Uncertain midpoints are
/// treated like Miss (the bracket moves toward the Hit side) and recorded as warnings.
/// Throws NoTransition when the endpoints are not (Miss or Uncertain, Hit).
BisectResult bisect_support(double low, double high, const std::function<Decision(double)>& classify,
                            double tol_t);

enum class Method { slope, bisect };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct SupportEstimate {
  int index = 0;
  double theta = 0.0;
  Vec2 omega;
  double t = 0.0;  ///< threshold probed (slope method) or final bracket midpoint (bisection)
  double t_hat = 0.0;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double fit_residual = 0.0;
  double margin = 0.0;  ///< |slope| - dead_band
  Verdict verdict = Verdict::Uncertain;
  /// False when no inclusion was detected in this direction; t_hat then equals B + 0.1 so the
  /// half-plane misses the domain.
  bool has_support = true;
  bool failed = false;
  std::string note;
  std::vector<IndicatorSample> samples;
  std::vector<DroppedProbe> dropped;
};

struct ReconstructionParams {
  int directions = 16;
  Method method = Method::slope;
  ProbePlan plan;
  /// Slope method threshold t = b + t_fraction (B - b).
  double t_fraction = 0.5;
  double bisect_margin = 0.05;
  double bisect_tol = 0.02;
  int workers = 1;
  bool throw_on_failure = true;
};

struct Reconstruction {
  HullPolygon hull;
  std::vector<SupportEstimate> estimates;
  /// Empty hull because every direction reported no support.
  bool no_inclusion = false;
  bool any_failed = false;
};

class ReconstructionError : public Error {
 public:
  ReconstructionError(const std::string& what, Reconstruction partial)
      : Error(what), partial(std::move(partial)) {}
  Reconstruction partial;
};

/// Estimates t*(omega_k) for omega_k = (cos 2 pi k/K, sin 2 pi k/K) and intersects the half-planes.
/// Directions are independent tasks; results are gathered by direction index.
Reconstruction reconstruct_hull(const IndicatorSource& source, const ReconstructionParams& params);

/// Slope-method estimate for one direction from its samples.
SupportEstimate support_from_slope(const Scene& scene, int index, int directions, double t,
                                   std::vector<IndicatorSample> samples,
                                   std::vector<DroppedProbe> dropped, const ProbePlan& plan);

}  // namespace enclosure
