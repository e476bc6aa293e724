#include "enclosure/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "enclosure/config.hpp"
#include "enclosure/experiment.hpp"

namespace enclosure {

namespace {

double relative_gap(Complex a, Complex ref) {
  const double num = std::abs(a - ref);
  const double den = std::abs(ref);
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

std::string fmt_fit(const std::optional<PowerFit>& f, int expected) {
  if (!f) return fmt::format("n/a (expected {})", expected);
  return fmt::format("{:.4f} (expected {}, {} points)", f->exponent, expected, f->points);
}

}  // namespace

Quantiles quantiles(std::vector<double> values) {
  std::erase_if(values, [](double x) { return !std::isfinite(x); });
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (values.empty()) return {nan, nan, nan, nan};
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), at(0.5), at(0.9), values.back()};
}

std::optional<PowerFit> fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_power_law: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] > 0.0 && y[k] > 0.0 && std::isfinite(x[k]) && std::isfinite(y[k])) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(y[k]));
    }
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return PowerFit{sxy / sxx, static_cast<int>(lx.size())};
}

LadderExponents ladder_exponents(const std::vector<LadderRow>& rows, int m) {
  LadderExponents out;
  out.m = m;
  std::vector<double> s, a, b, cs, c;
  for (const auto& r : rows) {
    s.push_back(r.scale);
    a.push_back(r.u_minus_v);
    b.push_back(r.u_minus_ut);
    if (r.E_minus_Et >= kResolveFactor * r.noise_floor) {
      cs.push_back(r.scale);
      c.push_back(r.E_minus_Et);
    }
  }
  out.u_minus_v = fit_power_law(s, a);
  out.u_minus_ut = fit_power_law(s, b);
  out.E_minus_Et = fit_power_law(cs, c);
  return out;
}

std::vector<ComparisonRow> compare_rows(const std::vector<IndicatorRow>& indicators) {
  std::vector<ComparisonRow> rows;
  for (const auto& r : indicators)
    rows.push_back({r.dir_index, r.t, r.h, relative_gap(r.E, r.E_tilde), relative_gap(r.E_tilde, r.E_oracle)});
  return rows;
}

ComparisonReport compare_pipelines(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / artifact::manifest))
    throw InvalidArgument("missing artifact: " + (dir / artifact::manifest).string());
  const ExperimentConfig config = load_config(dir / artifact::manifest);
  if (config.pipeline != Pipeline::both)
    throw InvalidArgument("compare needs a run with pipelines = both (this run used " + to_string(config.pipeline) + ")");

  ComparisonReport rep;
  rep.rows = compare_rows(read_indicator_table(dir / artifact::indicators));
  std::vector<double> a, b;
  for (const auto& r : rep.rows) {
    a.push_back(r.rel_E_Etilde);
    b.push_back(r.rel_Etilde_oracle);
  }
  rep.E_vs_Etilde = quantiles(a);
  rep.Etilde_vs_oracle = quantiles(b);
  if (std::filesystem::exists(dir / artifact::ladder))
    rep.ladder = ladder_exponents(read_ladder_table(dir / artifact::ladder), config.m);
  return rep;
}

std::string format_comparison(const ComparisonReport& rep) {
  std::string s = "dir_index t h rel_E_Et rel_Et_oracle\n";
  for (const auto& r : rep.rows)
    s += fmt::format("{} {} {} {} {}\n", r.dir_index, format_double(r.t), format_double(r.h),
                     format_double(r.rel_E_Etilde), format_double(r.rel_Etilde_oracle));
  auto q = [](const char* name, const Quantiles& v) {
    return fmt::format("# {}: min {} median {} p90 {} max {}\n", name, format_double(v.min), format_double(v.median),
                       format_double(v.p90), format_double(v.max));
  };
  s += q("|E-Et|/|Et|", rep.E_vs_Etilde);
  s += q("|Et-Eo|/|Eo|", rep.Etilde_vs_oracle);
  if (rep.ladder) {
    const int m = rep.ladder->m;
    s += "# ladder exponent |u-v|: " + fmt_fit(rep.ladder->u_minus_v, m) + "\n";
    s += "# ladder exponent |u-ut|: " + fmt_fit(rep.ladder->u_minus_ut, 2 * m - 1) + "\n";
    s += "# ladder exponent |E-Et|: " + fmt_fit(rep.ladder->E_minus_Et, 3 * m - 1) + "\n";
  }
  return s;
}

}  // namespace enclosure
