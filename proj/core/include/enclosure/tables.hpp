#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "enclosure/geometry.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

/// Shortest representation that reads back to the same double ("nan", "inf", "-inf" for
/// non-finite values).
std::string format_double(double x);
/// Inverse of format_double; throws InvalidArgument on malformed text.
double parse_double(const std::string& s);

inline constexpr const char* kIndicatorHeader =
    "dir_index theta t h J m reE imE reEt imEt reEo imEo logI newton_iters";
inline constexpr const char* kSupportHeader = "dir_index theta t_hat slope fit_residual verdict";
inline constexpr const char* kLadderHeader = "scale amplitude u_minus_v u_minus_ut E_minus_Et noise_floor newton_iters";

struct IndicatorRow {
  int dir_index = 0;
  double theta = 0.0;
  double t = 0.0;
  double h = 0.0;
  double J = 0.0;
  int m = 2;
  Complex E;
  Complex E_tilde;
  Complex E_oracle;
  double log_I = 0.0;
  int newton_iters = 0;
};

struct SupportRow {
  int dir_index = 0;
  double theta = 0.0;
  double t_hat = 0.0;
  double slope = 0.0;
  double fit_residual = 0.0;
  /// Miss | Hit | Uncertain | Failed
  std::string verdict;
};

struct LadderRow {
  double scale = 1.0;
  double amplitude = 0.0;
  double u_minus_v = 0.0;
  double u_minus_ut = 0.0;
  double E_minus_Et = 0.0;
  double noise_floor = 0.0;
  int newton_iters = 0;
};

std::vector<IndicatorRow> indicator_rows(const std::vector<SupportEstimate>& estimates);
std::vector<SupportRow> support_rows(const std::vector<SupportEstimate>& estimates);

std::string format_indicator_table(const std::vector<IndicatorRow>& rows);
std::string format_support_table(const std::vector<SupportRow>& rows);
std::string format_hull(const HullPolygon& hull);
std::string format_ladder_table(const std::vector<LadderRow>& rows);

/// Readers check the header and the column count; throw InvalidArgument naming file and line.
std::vector<IndicatorRow> read_indicator_table(const std::filesystem::path& path);
std::vector<SupportRow> read_support_table(const std::filesystem::path& path);
HullPolygon read_hull(const std::filesystem::path& path);
std::vector<LadderRow> read_ladder_table(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace enclosure
