#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

/// Every violated field of a configuration, in document order.
class ConfigError : public InvalidArgument {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Optional amplitude ladder: one fixed probe rescaled by each entry of `scales`.
struct LadderConfig {
  double theta = 0.0;
  double t = 0.5;
  double h = 0.2;
  /// Base amplitude is chosen so that sup |v| over the domain equals target_sup at scale 1.
  double target_sup = 0.5;
  std::vector<double> scales{1.0, 0.5, 0.25, 0.125};
};

struct ExperimentConfig {
  Rect domain;
  int m = 2;
  double mu = 1.0;
  BackgroundCoefficient background = ConstantCoefficient{0.0};
  std::vector<Inclusion> inclusions;

  int grid_n = 129;
  int oracle_quad_n = 1025;
  ProbeScheme probe_scheme = ProbeScheme::grid_harmonic;

  /// Empty means "auto": 1.1 x the largest min_admissible_J over the requested directions.
  std::optional<double> J;
  /// Empty means "auto": default_h_grid().
  std::vector<double> h;
  int directions = 16;
  Method method = Method::slope;
  double t_fraction = 0.5;
  double bisect_margin = 0.05;
  double bisect_tol = 0.02;
  /// Empty means "auto": 2m * 0.01.
  std::optional<double> dead_band;
  PrefactorModel prefactor = PrefactorModel::log_linear;
  double amplitude = 1.0;

  std::filesystem::path output = "out";
  int workers = 1;
  bool deterministic = true;
  Pipeline pipeline = Pipeline::solver;

  std::optional<LadderConfig> ladder;

  Scene scene() const;
  /// J after resolving "auto".
  double resolved_J() const;
  std::vector<double> resolved_h() const;
  double resolved_dead_band() const;
  ProbePlan plan() const;
  ReconstructionParams reconstruction_params() const;
};

/// Parses and validates YAML text. Relative output paths are kept as written.
/// Throws ConfigError listing every problem.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every validation error of an already populated config (empty when valid).
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// YAML document with every value resolved ("auto" replaced by numbers), parseable by
/// parse_config. `extra` is appended verbatim as further top-level keys.
std::string config_to_yaml(const ExperimentConfig& config, const std::string& extra = "");

}  // namespace enclosure
