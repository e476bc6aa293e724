#include "enclosure/experiment.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Core>
#include <fmt/format.h>

#include "enclosure/parallel.hpp"

#ifndef ENCLOSURE_VERSION
#define ENCLOSURE_VERSION "unknown"
#endif

namespace enclosure {

double ladder_base_amplitude(const Scene& scene, const LadderConfig& ladder, double J) {
  const Vec2 omega = direction_from_angle(ladder.theta);
  const SupportInterval si = support_interval(scene, omega);
  // max over the domain of |v| at unit amplitude is exp(-(J + b - t)/h)
  return ladder.target_sup * std::exp((J + si.b - ladder.t) / ladder.h);
}

std::vector<LadderRow> run_ladder(const SolverContext& ctx, const LadderConfig& ladder, double J) {
  const double a0 = ladder_base_amplitude(ctx.scene(), ladder, J);
  const ProbeParams base =
      ProbeParams::make(direction_from_angle(ladder.theta), ladder.t, ladder.h, J, ctx.scene().m(), a0);
  std::vector<LadderRow> rows;
  for (double s : ladder.scales) {
    const ProbeParams p = base.with_amplitude(a0 * s);
    const RemainderTerms r = remainder_terms(ctx, p);
    rows.push_back({s, p.amplitude, r.u_minus_v, r.u_minus_u_tilde, r.E_minus_E_tilde, r.noise_floor,
                    r.newton_iterations});
  }
  return rows;
}

namespace {

std::string yaml_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string run_info_block(const RunResult& r, int workers, double seconds) {
  std::string y = "run_info:\n";
  y += fmt::format("  version: {}\n", yaml_string(ENCLOSURE_VERSION));
  y += fmt::format("  eigen: \"{}.{}.{}\"\n", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
  y += fmt::format("  workers_used: {}\n", workers);
  y += fmt::format("  wall_time_s: {}\n", format_double(seconds));
  y += fmt::format("  exit_code: {}\n", r.exit_code);
  y += fmt::format("  no_inclusion: {}\n", r.reconstruction.no_inclusion ? "true" : "false");
  if (r.problems.empty()) {
    y += "  problems: []\n";
  } else {
    y += "  problems:\n";
    for (const auto& p : r.problems) y += "    - " + yaml_string(p) + "\n";
  }
  if (r.dropped.empty()) {
    y += "  dropped_probes: []\n";
  } else {
    y += "  dropped_probes:\n";
    for (const auto& d : r.dropped) y += "    - " + yaml_string(d) + "\n";
  }
  return y;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  if (const auto errs = validate_config(config); !errs.empty()) throw ConfigError(errs);
  const auto start = std::chrono::steady_clock::now();
  const Scene scene = config.scene();

  RunResult result;
  result.output = config.output;
  std::filesystem::create_directories(config.output);

  std::shared_ptr<const SolverContext> ctx;
  std::unique_ptr<IndicatorSource> source;
  if (config.pipeline == Pipeline::oracle) {
    source = std::make_unique<OracleSource>(scene, config.oracle_quad_n);
  } else {
    ctx = SolverContext::create(scene, config.grid_n, {}, config.probe_scheme);
    source = std::make_unique<SolverSource>(ctx, config.pipeline == Pipeline::both, config.oracle_quad_n);
  }

  const ReconstructionParams params = config.reconstruction_params();
  result.reconstruction = reconstruct_hull(*source, params);
  for (const auto& e : result.reconstruction.estimates) {
    for (const auto& d : e.dropped) result.dropped.push_back(fmt::format("{} {} {}", e.index, format_double(d.h), d.reason));
    if (e.failed) result.problems.push_back(fmt::format("direction {} failed: {}", e.index, e.note));
  }
  if (result.reconstruction.any_failed) {
    result.exit_code = kExitNumeric;
    if (result.reconstruction.hull.empty() && result.problems.empty())
      result.problems.push_back("too few directions left to bound a hull");
  }

  const auto& dir = config.output;
  write_text_file(dir / artifact::indicators, format_indicator_table(indicator_rows(result.reconstruction.estimates)));
  write_text_file(dir / artifact::support, format_support_table(support_rows(result.reconstruction.estimates)));
  write_text_file(dir / artifact::hull, format_hull(result.reconstruction.hull));

  if (config.ladder) {
    try {
      result.ladder = run_ladder(*ctx, *config.ladder, params.plan.J);
      write_text_file(dir / artifact::ladder, format_ladder_table(result.ladder));
    } catch (const Error& e) {
      result.exit_code = kExitNumeric;
      result.problems.push_back(std::string("ladder failed: ") + e.what());
    }
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text_file(dir / artifact::manifest,
                  config_to_yaml(config, run_info_block(result, resolve_worker_count(config.workers), seconds)));
  return result;
}

}  // namespace enclosure
