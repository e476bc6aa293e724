#include "enclosure/indicator.hpp"

#include <cmath>

#include "enclosure/errors.hpp"

namespace enclosure {

namespace {

Complex ipow(Complex w, int m) {
  Complex r = w;
  for (int k = 1; k < m; ++k) r *= w;
  return r;
}

void require_admissible(const ProbeParams& probe, const Scene& scene) {
  if (probe.m != scene.m()) throw InvalidArgument("probe exponent m differs from the scene's m");
  const GuardResult g = underflow_guard(probe, scene);
  if (!g.ok) throw InvalidArgument("probe rejected: " + g.reason);
}

// -q v^m with q sampled at the nodes
ComplexField forcing(const ComplexField& v, std::span<const double> q, int m) {
  ComplexField s(v.grid());
  for (std::size_t k = 0; k < s.values().size(); ++k) {
    if (q[k] != 0.0) s.values()[k] = -q[k] * ipow(v.values()[k], m);
  }
  return s;
}

bool all_zero(const ComplexField& f) {
  for (const Complex& c : f.values())
    if (c != Complex(0.0)) return false;
  return true;
}

ComplexField solve_zero_boundary(const DiscreteLaplacian& lap, const ComplexField& source) {
  if (all_zero(source)) return ComplexField(lap.grid());
  return solve_poisson(lap, source);
}

double weighted_magnitude(const BoundaryData& a, const BoundaryData& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k]) * std::abs(w[k]);
  return s * a.grid().spacing();
}

}  // namespace

std::string to_string(ProbeScheme s) {
  return s == ProbeScheme::grid_harmonic ? "grid_harmonic" : "closed_form";
}

ProbeScheme probe_scheme_from_string(const std::string& s) {
  if (s == "grid_harmonic") return ProbeScheme::grid_harmonic;
  if (s == "closed_form") return ProbeScheme::closed_form;
  throw InvalidArgument("unknown probe scheme '" + s + "' (expected grid_harmonic | closed_form)");
}

SolverContext::SolverContext(Scene scene, std::shared_ptr<const DiscreteLaplacian> laplacian,
                             NewtonOptions newton, ProbeScheme scheme)
    : scene_(std::move(scene)), laplacian_(std::move(laplacian)), newton_(newton), scheme_(scheme) {
  if (!(laplacian_->grid().rect() == scene_.omega()))
    throw InvalidArgument("SolverContext: grid does not cover the scene domain");
  q_total_ = sample_total_coefficient(scene_, grid());
  q_background_ = sample_background_coefficient(scene_, grid());
  background_zero_ = scene_.background_is_zero();
}

std::shared_ptr<const SolverContext> SolverContext::create(const Scene& scene, int n_nodes,
                                                           const NewtonOptions& newton, ProbeScheme scheme) {
  return create(scene, DiscreteLaplacian::assemble(Grid::build(scene.omega(), n_nodes)), newton, scheme);
}

std::shared_ptr<const SolverContext> SolverContext::create(
    const Scene& scene, std::shared_ptr<const DiscreteLaplacian> laplacian,
    const NewtonOptions& newton, ProbeScheme scheme) {
  return std::shared_ptr<const SolverContext>(
      new SolverContext(scene, std::move(laplacian), newton, scheme));
}

ComplexField SolverContext::sample_probe(const ProbeParams& probe) const {
  if (scheme_ == ProbeScheme::closed_form) return sample_field(calderon_evaluator(probe).interior, grid());
  const GridHarmonicProbe v(probe, grid());
  return sample_field([&v](Vec2 x) { return v(x); }, grid());
}

BoundaryData SolverContext::sample_weight(const ProbeParams& probe) const {
  if (scheme_ == ProbeScheme::closed_form) return sample_boundary(power_trace(probe, probe.m), grid());
  const GridHarmonicProbe v(probe, grid());
  return sample_boundary([&v](Vec2 x) { return v.weight(x); }, grid());
}

BoundaryData SolverContext::flux(const ComplexField& z) const {
  return scheme_ == ProbeScheme::closed_form ? normal_derivative(z) : summation_by_parts_flux(z);
}

IndicatorE indicator_E(const SolverContext& ctx, const ProbeParams& probe) {
  require_admissible(probe, ctx.scene());
  const int m = probe.m;
  const ComplexField v = ctx.sample_probe(probe);
  const BoundaryData fm = ctx.sample_weight(probe);

  SemilinearSolution nl = solve_semilinear_residual(ctx.laplacian(), ctx.q_total(), m, v, ctx.newton_options());
  if (!nl.report.converged)
    throw NumericFailure("indicator_E: Newton did not converge (data outside the small-data regime)");
  const ComplexField z0 = solve_zero_boundary(ctx.laplacian(), forcing(v, ctx.q_background(), m));

  const BoundaryData dz = ctx.flux(nl.z);
  const BoundaryData dz0 = ctx.flux(z0);
  BoundaryData gap = dz;
  gap -= dz0;

  IndicatorE out;
  out.E = boundary_integral(gap, fm);
  out.report = std::move(nl.report);
  out.noise_floor = ctx.newton_options().tol_rel * (weighted_magnitude(dz, fm) + weighted_magnitude(dz0, fm));
  return out;
}

Complex indicator_E_tilde(const SolverContext& ctx, const ProbeParams& probe) {
  require_admissible(probe, ctx.scene());
  const int m = probe.m;
  const ComplexField v = ctx.sample_probe(probe);
  const BoundaryData fm = ctx.sample_weight(probe);
  const ComplexField zt = solve_zero_boundary(ctx.laplacian(), forcing(v, ctx.q_total(), m));
  const ComplexField z0 = solve_zero_boundary(ctx.laplacian(), forcing(v, ctx.q_background(), m));
  BoundaryData gap = ctx.flux(zt);
  gap -= ctx.flux(z0);
  return boundary_integral(gap, fm);
}

RemainderTerms remainder_terms(const SolverContext& ctx, const ProbeParams& probe) {
  require_admissible(probe, ctx.scene());
  const int m = probe.m;
  const ComplexField v = ctx.sample_probe(probe);
  const BoundaryData fm = ctx.sample_weight(probe);
  SemilinearSolution nl = solve_semilinear_residual(ctx.laplacian(), ctx.q_total(), m, v, ctx.newton_options());
  if (!nl.report.converged) throw NumericFailure("remainder_terms: Newton did not converge");
  const ComplexField zt = solve_zero_boundary(ctx.laplacian(), forcing(v, ctx.q_total(), m));

  const BoundaryData dz = ctx.flux(nl.z);
  const BoundaryData dzt = ctx.flux(zt);
  BoundaryData gap = dz;
  gap -= dzt;

  RemainderTerms r;
  r.u_minus_v = nl.z.sup_norm();
  r.u_minus_u_tilde = (nl.z - zt).sup_norm();
  r.E_minus_E_tilde = std::abs(boundary_integral(gap, fm));
  r.noise_floor = ctx.newton_options().tol_rel * (weighted_magnitude(dz, fm) + weighted_magnitude(dzt, fm));
  r.newton_iterations = nl.report.iterations;
  return r;
}

Complex oracle_E_tilde(const Scene& scene, const ProbeParams& probe, int quad_n) {
  if (scene.inclusions().empty()) return 0.0;
  if (quad_n < 3) throw InvalidArgument("oracle_E_tilde: quad_n must be >= 3");
  const Rect& r = scene.omega();
  const double dx = r.width() / (quad_n - 1);
  const double dy = r.height() / (quad_n - 1);
  const int m = probe.m;
  // weights exp(-2m (x.omega - ref)/h) stay <= 1 inside D; the common factor is applied in logs
  const double ref = *true_support_value(scene, probe.omega);

  Rect box{r.x1, r.x0, r.y1, r.y0};
  for (const auto& inc : scene.inclusions()) {
    const Rect b = shape_bounds(inc.shape);
    box.x0 = std::min(box.x0, b.x0);
    box.x1 = std::max(box.x1, b.x1);
    box.y0 = std::min(box.y0, b.y0);
    box.y1 = std::max(box.y1, b.y1);
  }
  const int i0 = std::max(0, static_cast<int>(std::floor((box.x0 - r.x0) / dx)));
  const int i1 = std::min(quad_n - 1, static_cast<int>(std::ceil((box.x1 - r.x0) / dx)));
  const int j0 = std::max(0, static_cast<int>(std::floor((box.y0 - r.y0) / dy)));
  const int j1 = std::min(quad_n - 1, static_cast<int>(std::ceil((box.y1 - r.y0) / dy)));

  const double rate = 2.0 * m / probe.h;
  double sum = 0.0;
  for (int j = j0; j <= j1; ++j) {
    double row = 0.0;
    for (int i = i0; i <= i1; ++i) {
      const Vec2 x{r.x0 + i * dx, r.y0 + j * dy};
      const double q = inclusion_coefficient(scene, x);
      if (q != 0.0) row += q * std::exp(-rate * (dot(x, probe.omega) - ref));
    }
    sum += row;
  }
  const double log_scale =
      2.0 * m * std::log(probe.amplitude) - rate * (probe.J + ref - probe.t) + std::log(dx * dy);
  return Complex(-sum * std::exp(log_scale), 0.0);
}

double scaled_log_indicator(const ProbeParams& probe, Complex E) {
  const double mag = std::abs(E);
  if (mag == 0.0) return -std::numeric_limits<double>::infinity();
  return 2.0 * probe.m * probe.J / probe.h + std::log(mag);
}

std::string to_string(Pipeline p) {
  switch (p) {
    case Pipeline::oracle: return "oracle";
    case Pipeline::solver: return "solver";
    case Pipeline::both: return "both";
  }
  return "unknown";
}

Pipeline pipeline_from_string(const std::string& s) {
  if (s == "oracle") return Pipeline::oracle;
  if (s == "solver") return Pipeline::solver;
  if (s == "both") return Pipeline::both;
  throw InvalidArgument("unknown pipeline '" + s + "' (expected oracle | solver | both)");
}

IndicatorSample OracleSource::sample(const ProbeParams& probe) const {
  require_admissible(probe, scene_);
  IndicatorSample s;
  s.probe = probe;
  s.E_oracle = oracle_E_tilde(scene_, probe, quad_n_);
  s.log_I = scaled_log_indicator(probe, s.E_oracle);
  s.resolved = std::isfinite(s.log_I);
  return s;
}

IndicatorSample SolverSource::sample(const ProbeParams& probe) const {
  IndicatorSample s;
  s.probe = probe;
  IndicatorE e = indicator_E(*ctx_, probe);
  s.E = e.E;
  s.newton = std::move(e.report);
  s.noise_floor = e.noise_floor;
  s.E_tilde = indicator_E_tilde(*ctx_, probe);
  if (with_oracle_) s.E_oracle = oracle_E_tilde(ctx_->scene(), probe, quad_n_);
  s.log_I = scaled_log_indicator(probe, s.E);
  s.resolved = std::isfinite(s.log_I) && std::abs(s.E) > kResolveFactor * s.noise_floor;
  return s;
}

}  // namespace enclosure
