#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "enclosure/field.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/pde.hpp"
#include "enclosure/probe.hpp"

namespace enclosure {

/// How the solver pipeline discretizes the probe and the boundary flux.
///  - grid_harmonic: GridHarmonicProbe samples and summation_by_parts_flux. The boundary integral
///    then equals its interior counterpart to roundoff, so no exponentially weighted boundary
///    error is left to cancel.
///  - closed_form: closed-form v and f^m with the second-order one-sided normal_derivative.
enum class ProbeScheme { grid_harmonic, closed_form };

std::string to_string(ProbeScheme s);
ProbeScheme probe_scheme_from_string(const std::string& s);

/// Immutable per-scene solver state: grid, factored Laplacian and nodal coefficients. One
/// context serves any number of concurrent probe evaluations.
class SolverContext {
 public:
  static std::shared_ptr<const SolverContext> create(const Scene& scene, int n_nodes,
                                                     const NewtonOptions& newton = {},
                                                     ProbeScheme scheme = ProbeScheme::grid_harmonic);
  static std::shared_ptr<const SolverContext> create(
      const Scene& scene, std::shared_ptr<const DiscreteLaplacian> laplacian,
      const NewtonOptions& newton = {}, ProbeScheme scheme = ProbeScheme::grid_harmonic);

  const Scene& scene() const { return scene_; }
  const Grid& grid() const { return laplacian_->grid(); }
  const DiscreteLaplacian& laplacian() const { return *laplacian_; }
  std::shared_ptr<const DiscreteLaplacian> shared_laplacian() const { return laplacian_; }
  std::span<const double> q_total() const { return q_total_; }
  std::span<const double> q_background() const { return q_background_; }
  const NewtonOptions& newton_options() const { return newton_; }
  ProbeScheme scheme() const { return scheme_; }

  /// Probe v sampled on the grid.
  ComplexField sample_probe(const ProbeParams& probe) const;
  /// Boundary weight standing in for f^m.
  BoundaryData sample_weight(const ProbeParams& probe) const;
  /// Outward boundary flux of a field vanishing on the boundary.
  BoundaryData flux(const ComplexField& z) const;

 private:
  SolverContext(Scene scene, std::shared_ptr<const DiscreteLaplacian> laplacian, NewtonOptions newton,
                ProbeScheme scheme);

  Scene scene_;
  std::shared_ptr<const DiscreteLaplacian> laplacian_;
  std::vector<double> q_total_;
  std::vector<double> q_background_;
  bool background_zero_ = true;
  NewtonOptions newton_;
  ProbeScheme scheme_;
};

struct IndicatorE {
  Complex E;
  NewtonReport report;
  /// Magnitude below which E is indistinguishable from solver error.
  double noise_floor = 0.0;
};

/// E(f) = boundary integral of (d_nu u_f - d_nu u~_{0,f}) conj(f^m), evaluated from the
/// zero-boundary corrections z_f (Newton) and z_{0,f} (linear) only, with the context's
/// ProbeScheme. Throws NumericFailure
/// when Newton does not converge and InvalidArgument when the probe is rejected by the guard.
IndicatorE indicator_E(const SolverContext& ctx, const ProbeParams& probe);

/// Same integral with the Taylor approximation u~_f in place of u_f: two linear solves.
Complex indicator_E_tilde(const SolverContext& ctx, const ProbeParams& probe);

/// -sum over quadrature nodes inside D of q_D |v|^(2m) dx^2 on a quad_n x quad_n node grid of
/// the domain, independent of any PDE grid.
Complex oracle_E_tilde(const Scene& scene, const ProbeParams& probe, int quad_n);

/// 2mJ/h + ln|E|, or -infinity when E == 0.
double scaled_log_indicator(const ProbeParams& probe, Complex E);

/// Remainder magnitudes of one probe, all computed from zero-boundary corrections.
struct RemainderTerms {
  double u_minus_v = 0.0;        ///< sup |u_f - v_f| = sup |z_f|
  double u_minus_u_tilde = 0.0;  ///< sup |u_f - u~_f| = sup |z_f - z~_f|
  double E_minus_E_tilde = 0.0;  ///< |E(f) - E~(f)|
  /// Solver noise level of the E - E~ integral.
  double noise_floor = 0.0;
  int newton_iterations = 0;
};

RemainderTerms remainder_terms(const SolverContext& ctx, const ProbeParams& probe);

enum class Pipeline { oracle, solver, both };

std::string to_string(Pipeline p);
Pipeline pipeline_from_string(const std::string& s);

/// One probe evaluation. Quantities not computed by the pipeline are NaN.
struct IndicatorSample {
  ProbeParams probe;
  Complex E{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  Complex E_tilde{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  Complex E_oracle{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  /// Scaled log indicator of the pipeline's primary value (E for solver runs, the oracle otherwise).
  double log_I = -std::numeric_limits<double>::infinity();
  NewtonReport newton;
  double noise_floor = 0.0;
  /// The primary value clears the noise floor by kResolveFactor.
  bool resolved = false;
};

inline constexpr double kResolveFactor = 1e3;

/// Produces indicator samples for probes. Implementations are immutable and thread-safe.
class IndicatorSource {
 public:
  virtual ~IndicatorSource() = default;
  virtual IndicatorSample sample(const ProbeParams& probe) const = 0;
  virtual const Scene& scene() const = 0;
  virtual Pipeline pipeline() const = 0;
};

/// Semianalytic pipeline: E_oracle from direct quadrature.
class OracleSource final : public IndicatorSource {
 public:
  OracleSource(Scene scene, int quad_n) : scene_(std::move(scene)), quad_n_(quad_n) {}

  IndicatorSample sample(const ProbeParams& probe) const override;
  const Scene& scene() const override { return scene_; }
  Pipeline pipeline() const override { return Pipeline::oracle; }

 private:
  Scene scene_;
  int quad_n_;
};

/// Forward-solver pipeline: E and E_tilde from the PDE, optionally the oracle alongside.
class SolverSource final : public IndicatorSource {
 public:
  SolverSource(std::shared_ptr<const SolverContext> ctx, bool with_oracle = false, int quad_n = 1025)
      : ctx_(std::move(ctx)), with_oracle_(with_oracle), quad_n_(quad_n) {}

  IndicatorSample sample(const ProbeParams& probe) const override;
  const Scene& scene() const override { return ctx_->scene(); }
  Pipeline pipeline() const override { return with_oracle_ ? Pipeline::both : Pipeline::solver; }
  const SolverContext& context() const { return *ctx_; }

 private:
  std::shared_ptr<const SolverContext> ctx_;
  bool with_oracle_;
  int quad_n_;
};

}  // namespace enclosure
