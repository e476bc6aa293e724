#pragma once

#include <filesystem>
#include <string>

#include "enclosure/config.hpp"
#include "enclosure/tables.hpp"

namespace enclosure {

/// SVG rendering of a run: domain outline, true inclusions, true convex hull (dashed),
/// reconstructed hull (solid), one faint support line per direction and markers for failed
/// directions.
std::string render_figure(const ExperimentConfig& config, const std::vector<SupportRow>& support,
                          const HullPolygon& hull);

/// Reads manifest, support table and hull from a run directory and writes figure.svg there.
/// Returns the figure path. Throws InvalidArgument when an artifact is missing.
std::filesystem::path emit_figure(const std::filesystem::path& artifact_dir);

}  // namespace enclosure
