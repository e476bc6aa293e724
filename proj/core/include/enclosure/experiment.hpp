#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "enclosure/config.hpp"
#include "enclosure/reconstruct.hpp"
#include "enclosure/tables.hpp"

namespace enclosure {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Artifact file names inside a run directory.
namespace artifact {
inline constexpr const char* indicators = "indicators.txt";
inline constexpr const char* support = "support.txt";
inline constexpr const char* hull = "hull.txt";
inline constexpr const char* manifest = "manifest.yaml";
inline constexpr const char* ladder = "ladder.txt";
inline constexpr const char* figure = "figure.svg";
inline constexpr const char* compare = "compare.txt";
}  // namespace artifact

struct RunResult {
  int exit_code = kExitOk;
  std::filesystem::path output;
  Reconstruction reconstruction;
  std::vector<LadderRow> ladder;
  /// Human-readable problems (failed directions, ladder failures).
  std::vector<std::string> problems;
  /// Probes rejected by the guard, as "dir_index h reason".
  std::vector<std::string> dropped;
};

/// Base amplitude giving sup |v| = target over the domain for the ladder probe.
double ladder_base_amplitude(const Scene& scene, const LadderConfig& ladder, double J);

/// Amplitude ladder on a fixed probe, one row per scale.
std::vector<LadderRow> run_ladder(const SolverContext& ctx, const LadderConfig& ladder, double J);

/// Runs the sweep, reconstructs the hull and writes the artifacts into config.output.
/// Direction failures are recorded and give exit code kExitNumeric; the artifacts are still written.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace enclosure
