#include "enclosure/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "enclosure/parallel.hpp"

namespace enclosure {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Miss: return "Miss";
    case Verdict::Hit: return "Hit";
    case Verdict::Uncertain: return "Uncertain";
  }
  return "Unknown";
}

std::string to_string(PrefactorModel m) {
  switch (m) {
    case PrefactorModel::none: return "none";
    case PrefactorModel::log: return "log";
    case PrefactorModel::log_linear: return "log_linear";
  }
  return "unknown";
}

PrefactorModel prefactor_model_from_string(const std::string& s) {
  if (s == "none") return PrefactorModel::none;
  if (s == "log") return PrefactorModel::log;
  if (s == "log_linear") return PrefactorModel::log_linear;
  throw InvalidArgument("unknown prefactor model '" + s + "' (expected none | log | log_linear)");
}

std::string to_string(Method m) { return m == Method::slope ? "slope" : "bisect"; }

Method method_from_string(const std::string& s) {
  if (s == "slope") return Method::slope;
  if (s == "bisect") return Method::bisect;
  throw InvalidArgument("unknown method '" + s + "' (expected slope | bisect)");
}

namespace {

int columns_for(PrefactorModel m) {
  switch (m) {
    case PrefactorModel::none: return 2;
    case PrefactorModel::log: return 3;
    case PrefactorModel::log_linear: return 4;
  }
  return 2;
}

PrefactorModel model_for_columns(int c) {
  if (c >= 4) return PrefactorModel::log_linear;
  if (c == 3) return PrefactorModel::log;
  return PrefactorModel::none;
}

std::string fmt_uncertain(double t) {
  return fmt::format("Uncertain verdict at t = {}; treated as Miss", t);
}

Verdict verdict_for(double slope, double dead_band) {
  if (slope > dead_band) return Verdict::Hit;
  if (slope < -dead_band) return Verdict::Miss;
  return Verdict::Uncertain;
}

}  // namespace

SlopeFit fit_log_indicator(std::span<const double> h, std::span<const double> log_I,
                           PrefactorModel model) {
  if (h.size() != log_I.size()) throw InvalidArgument("fit_log_indicator: size mismatch");
  const auto n = static_cast<int>(h.size());
  if (n < 3) throw InvalidArgument("fit_log_indicator: need at least 3 samples");
  std::set<double> distinct;
  for (int k = 0; k < n; ++k) {
    if (!(h[k] > 0.0) || !std::isfinite(h[k])) throw InvalidArgument("fit_log_indicator: h must be positive");
    if (!std::isfinite(log_I[k])) throw InvalidArgument("fit_log_indicator: log_I must be finite");
    distinct.insert(h[k]);
  }
  if (distinct.size() < 3) throw InvalidArgument("fit_log_indicator: need at least 3 distinct h (zero variance in 1/h)");

  const int cols = std::min(columns_for(model), static_cast<int>(distinct.size()) - 1);
  Eigen::MatrixXd A(n, cols);
  Eigen::VectorXd y(n);
  for (int k = 0; k < n; ++k) {
    A(k, 0) = 1.0 / h[k];
    A(k, 1) = 1.0;
    if (cols > 2) A(k, 2) = std::log(h[k]);
    if (cols > 3) A(k, 3) = h[k];
    y(k) = log_I[k];
  }
  Eigen::VectorXd scale = A.cwiseAbs().colwise().maxCoeff().transpose();
  for (int c = 0; c < cols; ++c) {
    if (scale(c) == 0.0) scale(c) = 1.0;
    A.col(c) /= scale(c);
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < cols) throw NumericFailure("fit_log_indicator: rank-deficient design");
  const Eigen::VectorXd coef = qr.solve(y);

  SlopeFit fit;
  fit.slope = coef(0) / scale(0);
  fit.residual = std::sqrt((A * coef - y).squaredNorm() / n);
  fit.samples = n;
  fit.model = model_for_columns(cols);
  return fit;
}

Decision decide_from_samples(std::vector<IndicatorSample> samples, double dead_band,
                             PrefactorModel model) {
  Decision d;
  d.dead_band = dead_band;
  std::vector<double> hs, ls;
  for (const auto& s : samples) {
    if (s.resolved && std::isfinite(s.log_I)) {
      hs.push_back(s.probe.h);
      ls.push_back(s.log_I);
    }
  }
  const std::size_t total = samples.size();
  d.samples = std::move(samples);
  if (total < 3) {
    d.verdict = Verdict::Uncertain;
    d.reason = total == 0 ? "all h rejected by guard" : "fewer than 3 admissible h";
    return d;
  }
  if (hs.empty()) {
    d.verdict = Verdict::Miss;
    d.reason = "below noise floor";
    return d;
  }
  if (std::set<double>(hs.begin(), hs.end()).size() < 3) {
    d.verdict = Verdict::Uncertain;
    d.reason = "fewer than 3 resolved h";
    return d;
  }
  d.fit = fit_log_indicator(hs, ls, model);
  d.slope = d.fit.slope;
  d.verdict = verdict_for(d.slope, dead_band);
  return d;
}

namespace {

struct ProbeSet {
  std::vector<ProbeParams> probes;
  std::vector<DroppedProbe> dropped;
};

ProbeSet admissible_probes(const Scene& scene, Vec2 omega, double t, const ProbePlan& plan) {
  ProbeSet set;
  for (double h : plan.h_grid) {
    const ProbeParams p = ProbeParams::make(omega, t, h, plan.J, plan.m, plan.amplitude);
    const GuardResult g = underflow_guard(p, scene);
    if (g.ok)
      set.probes.push_back(p);
    else
      set.dropped.push_back({h, g.reason});
  }
  return set;
}

}  // namespace

Decision classify_halfspace(const IndicatorSource& source, Vec2 omega, double t, const ProbePlan& plan) {
  const SupportInterval si = support_interval(source.scene(), omega);
  if (!(t > si.b && t < si.B)) throw InvalidArgument("classify_halfspace: t must lie in (b, B)");
  ProbeSet set = admissible_probes(source.scene(), omega, t, plan);
  std::vector<IndicatorSample> samples;
  samples.reserve(set.probes.size());
  for (const auto& p : set.probes) samples.push_back(source.sample(p));
  Decision d = decide_from_samples(std::move(samples), plan.dead_band, plan.model);
  d.dropped = std::move(set.dropped);
  return d;
}

SupportFit estimate_support_slope(Vec2 omega, double t, std::span<const IndicatorSample> samples,
                                  PrefactorModel model) {
  if (std::abs(norm(omega) - 1.0) > 1e-12) throw InvalidArgument("estimate_support_slope: omega must be a unit vector");
  std::vector<double> hs, ls;
  int m = 0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.log_I)) continue;
    hs.push_back(s.probe.h);
    ls.push_back(s.log_I);
    m = s.probe.m;
  }
  if (hs.size() < 3) throw InvalidArgument("estimate_support_slope: need at least 3 samples with finite log_I");
  const SlopeFit fit = fit_log_indicator(hs, ls, model);
  return {t - fit.slope / (2.0 * m), fit.slope, fit.residual};
}

NoTransition::NoTransition(Verdict low, Verdict high)
    : Error("no transition: classify(low) = " + to_string(low) + ", classify(high) = " + to_string(high)),
      low_verdict(low),
      high_verdict(high) {}

BisectResult bisect_support(double low, double high, const std::function<Decision(double)>& classify,
                            double tol_t) {
  if (!(tol_t > 0.0)) throw InvalidArgument("bisect_support: tol_t must be positive");
  if (!(low < high)) throw InvalidArgument("bisect_support: empty range");
  BisectResult r;
  const Decision dl = classify(low);
  const Decision dh = classify(high);
  r.evaluations = 2;
  if (dl.verdict == Verdict::Hit || dh.verdict != Verdict::Hit) throw NoTransition(dl.verdict, dh.verdict);
  if (dl.verdict == Verdict::Uncertain) r.warnings.push_back(fmt_uncertain(low));
  r.last_hit = dh;
  while (high - low > tol_t) {
    const double mid = 0.5 * (low + high);
    Decision d = classify(mid);
    ++r.evaluations;
    if (d.verdict == Verdict::Hit) {
      high = mid;
      r.last_hit = std::move(d);
    } else {
      if (d.verdict == Verdict::Uncertain) r.warnings.push_back(fmt_uncertain(mid));
      low = mid;
    }
  }
  r.low = low;
  r.high = high;
  r.t_hat = 0.5 * (low + high);
  return r;
}

namespace {

double clamp_t_hat(double t_hat, const SupportInterval& si) {
  return std::clamp(t_hat, si.b - 0.1, si.B + 0.1);
}

void mark_no_support(SupportEstimate& e, const SupportInterval& si, const std::string& why) {
  e.has_support = false;
  e.verdict = Verdict::Miss;
  e.t_hat = si.B + 0.1;
  e.note = why;
}

SupportEstimate base_estimate(int index, int directions) {
  SupportEstimate e;
  e.index = index;
  e.theta = 2.0 * std::numbers::pi * index / directions;
  e.omega = direction_from_angle(e.theta);
  return e;
}

}  // namespace

SupportEstimate support_from_slope(const Scene& scene, int index, int directions, double t,
                                   std::vector<IndicatorSample> samples,
                                   std::vector<DroppedProbe> dropped, const ProbePlan& plan) {
  SupportEstimate e = base_estimate(index, directions);
  const SupportInterval si = support_interval(scene, e.omega);
  e.t = t;
  e.dropped = std::move(dropped);
  Decision d = decide_from_samples(std::move(samples), plan.dead_band, plan.model);
  e.samples = std::move(d.samples);
  if (d.verdict == Verdict::Miss && d.reason == "below noise floor") {
    mark_no_support(e, si, "no inclusion detected: indicator below noise floor");
    return e;
  }
  if (!std::isfinite(d.slope)) {
    e.failed = true;
    e.verdict = Verdict::Uncertain;
    e.t_hat = clamp_t_hat(t, si);
    e.note = d.reason;
    return e;
  }
  e.slope = d.slope;
  e.fit_residual = d.fit.residual;
  e.margin = std::abs(d.slope) - d.dead_band;
  e.verdict = d.verdict;
  e.t_hat = clamp_t_hat(t - d.slope / (2.0 * plan.m), si);
  if (e.t_hat >= si.B) e.has_support = false;
  return e;
}

namespace {

SupportEstimate support_from_bisection(const IndicatorSource& source, int index,
                                       const ReconstructionParams& params) {
  SupportEstimate e = base_estimate(index, params.directions);
  const SupportInterval si = support_interval(source.scene(), e.omega);
  const double low = si.b + params.bisect_margin;
  const double high = si.B - params.bisect_margin;
  auto classify = [&](double t) { return classify_halfspace(source, e.omega, t, params.plan); };
  try {
    BisectResult r = bisect_support(low, high, classify, params.bisect_tol);
    e.t = r.t_hat;
    e.t_hat = clamp_t_hat(r.t_hat, si);
    e.slope = r.last_hit.slope;
    e.fit_residual = r.last_hit.fit.residual;
    e.margin = std::abs(e.slope) - r.last_hit.dead_band;
    e.verdict = Verdict::Hit;
    e.samples = std::move(r.last_hit.samples);
    e.dropped = std::move(r.last_hit.dropped);
    for (const auto& w : r.warnings) e.note += (e.note.empty() ? "" : "; ") + w;
  } catch (const NoTransition& nt) {
    e.t = high;
    if (nt.low_verdict != Verdict::Hit && nt.high_verdict == Verdict::Miss) {
      mark_no_support(e, si, std::string("no inclusion detected: ") + nt.what());
    } else {
      e.failed = true;
      e.verdict = Verdict::Uncertain;
      e.t_hat = clamp_t_hat(high, si);
      e.note = nt.what();
    }
  }
  return e;
}

std::vector<SupportEstimate> slope_estimates(const IndicatorSource& source,
                                             const ReconstructionParams& params, int workers) {
  const int K = params.directions;
  const Scene& scene = source.scene();
  std::vector<double> t(K);
  std::vector<ProbeSet> sets(K);
  struct Task {
    int dir;
    std::size_t slot;
  };
  std::vector<Task> tasks;
  for (int k = 0; k < K; ++k) {
    const Vec2 omega = direction_from_angle(2.0 * std::numbers::pi * k / K);
    const SupportInterval si = support_interval(scene, omega);
    t[k] = si.b + params.t_fraction * (si.B - si.b);
    sets[k] = admissible_probes(scene, omega, t[k], params.plan);
    for (std::size_t s = 0; s < sets[k].probes.size(); ++s) tasks.push_back({k, s});
  }

  std::vector<std::vector<std::optional<IndicatorSample>>> results(K);
  std::vector<std::vector<std::string>> errors(K);
  for (int k = 0; k < K; ++k) {
    results[k].resize(sets[k].probes.size());
    errors[k].resize(sets[k].probes.size());
  }
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const Task& task = tasks[i];
    try {
      results[task.dir][task.slot] = source.sample(sets[task.dir].probes[task.slot]);
    } catch (const NumericFailure& ex) {
      errors[task.dir][task.slot] = ex.what();
    }
  });

  std::vector<SupportEstimate> out;
  out.reserve(K);
  for (int k = 0; k < K; ++k) {
    std::vector<IndicatorSample> samples;
    std::string failure;
    for (std::size_t s = 0; s < results[k].size(); ++s) {
      if (results[k][s]) samples.push_back(std::move(*results[k][s]));
      if (!errors[k][s].empty() && failure.empty()) failure = errors[k][s];
    }
    if (!failure.empty()) {
      SupportEstimate e = base_estimate(k, K);
      e.t = t[k];
      e.failed = true;
      e.t_hat = clamp_t_hat(t[k], support_interval(scene, e.omega));
      e.note = failure;
      e.samples = std::move(samples);
      e.dropped = std::move(sets[k].dropped);
      out.push_back(std::move(e));
      continue;
    }
    out.push_back(support_from_slope(scene, k, K, t[k], std::move(samples), std::move(sets[k].dropped),
                                     params.plan));
  }
  return out;
}

}  // namespace

Reconstruction reconstruct_hull(const IndicatorSource& source, const ReconstructionParams& params) {
  if (params.directions < 8) throw InvalidArgument("reconstruct_hull: at least 8 directions are required");
  if (params.plan.m != source.scene().m()) throw InvalidArgument("reconstruct_hull: plan m differs from the scene's m");
  const int workers = resolve_worker_count(params.workers);

  Reconstruction rec;
  if (params.method == Method::slope) {
    rec.estimates = slope_estimates(source, params, workers);
  } else {
    const int K = params.directions;
    std::vector<std::optional<SupportEstimate>> slots(K);
    parallel_for(K, workers, [&](std::size_t k) {
      try {
        slots[k] = support_from_bisection(source, static_cast<int>(k), params);
      } catch (const NumericFailure& ex) {
        SupportEstimate e = base_estimate(static_cast<int>(k), K);
        e.failed = true;
        e.verdict = Verdict::Uncertain;
        const SupportInterval si = support_interval(source.scene(), e.omega);
        e.t = e.t_hat = 0.5 * (si.b + si.B);
        e.note = ex.what();
        slots[k] = std::move(e);
      }
    });
    for (auto& s : slots) rec.estimates.push_back(std::move(*s));
  }

  std::vector<HalfPlane> planes;
  bool all_missing = true;
  for (const auto& e : rec.estimates) {
    if (e.failed) {
      rec.any_failed = true;
      continue;
    }
    if (e.has_support) all_missing = false;
    planes.push_back({e.omega, e.t_hat});
  }
  if (rec.any_failed && params.throw_on_failure) {
    int count = 0;
    for (const auto& e : rec.estimates) count += e.failed ? 1 : 0;
    throw ReconstructionError(fmt::format("reconstruct_hull: {} of {} directions failed", count,
                                          params.directions),
                              std::move(rec));
  }
  rec.no_inclusion = all_missing && !rec.any_failed;
  try {
    rec.hull = hull_from_halfplanes(source.scene().omega(), planes);
  } catch (const InvalidArgument&) {
    // too few surviving directions to bound a polygon
    rec.hull = HullPolygon();
    rec.any_failed = true;
  }
  return rec;
}

}  // namespace enclosure
