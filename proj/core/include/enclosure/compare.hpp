#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enclosure/tables.hpp"

namespace enclosure {

struct ComparisonRow {
  int dir_index = 0;
  double t = 0.0;
  double h = 0.0;
  /// |E - E~| / |E~|; 0 when both vanish.
  double rel_E_Etilde = 0.0;
  /// |E~_pde - E~_oracle| / |E~_oracle|; 0 when both vanish.
  double rel_Etilde_oracle = 0.0;
};

struct Quantiles {
  double min = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
};

/// Linear-interpolated quantiles of the finite values; all NaN when there are none.
Quantiles quantiles(std::vector<double> values);

struct PowerFit {
  double exponent = 0.0;
  int points = 0;
};

/// Least-squares exponent p in y ~ C x^p over the points with x, y > 0.
std::optional<PowerFit> fit_power_law(std::span<const double> x, std::span<const double> y);

struct LadderExponents {
  int m = 2;
  std::optional<PowerFit> u_minus_v;   ///< expected m
  std::optional<PowerFit> u_minus_ut;  ///< expected 2m - 1
  /// Only points at least kResolveFactor above the noise floor; expected 3m - 1.
  std::optional<PowerFit> E_minus_Et;
};

LadderExponents ladder_exponents(const std::vector<LadderRow>& rows, int m);

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  Quantiles E_vs_Etilde;
  Quantiles Etilde_vs_oracle;
  std::optional<LadderExponents> ladder;
};

std::vector<ComparisonRow> compare_rows(const std::vector<IndicatorRow>& indicators);

/// Reads a run directory produced with pipelines = both. Throws InvalidArgument for
/// single-pipeline runs or missing artifacts.
ComparisonReport compare_pipelines(const std::filesystem::path& artifact_dir);

std::string format_comparison(const ComparisonReport& report);

}  // namespace enclosure
