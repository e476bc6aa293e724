#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "enclosure/compare.hpp"
#include "enclosure/config.hpp"
#include "enclosure/experiment.hpp"
#include "enclosure/figure.hpp"

namespace fs = std::filesystem;
using namespace enclosure;

namespace {

int report_config_error(const ConfigError& e) {
  fmt::print(stderr, "config error:\n");
  for (const auto& msg : e.errors()) fmt::print(stderr, "  {}\n", msg);
  return kExitConfig;
}

int cmd_validate(const std::string& path) {
  const ExperimentConfig c = load_config(path);
  const ProbePlan plan = c.plan();
  fmt::print("ok: {} inclusion(s), m = {}, N = {}, K = {}, J = {}, {} h values, pipeline {}\n", c.inclusions.size(),
             c.m, c.grid_n, c.directions, format_double(plan.J), plan.h_grid.size(), to_string(c.pipeline));
  return kExitOk;
}

int cmd_run(const std::string& path, const std::string& output_override) {
  ExperimentConfig c = load_config(path);
  if (!output_override.empty()) c.output = output_override;
  const RunResult r = run_experiment(c);
  for (const auto& d : r.dropped) fmt::print(stderr, "dropped probe (dir h reason): {}\n", d);
  for (const auto& p : r.problems) fmt::print(stderr, "problem: {}\n", p);
  if (r.reconstruction.no_inclusion)
    fmt::print("no inclusion detected\n");
  else
    fmt::print("hull with {} vertices, area {}\n", r.reconstruction.hull.vertices().size(),
               format_double(r.reconstruction.hull.area()));
  fmt::print("artifacts written to {}\n", r.output.string());
  return r.exit_code;
}

int cmd_figure(const std::string& dir) {
  fmt::print("{}\n", emit_figure(dir).string());
  return kExitOk;
}

int cmd_compare(const std::string& dir) {
  const ComparisonReport rep = compare_pipelines(dir);
  const std::string text = format_comparison(rep);
  write_text_file(fs::path(dir) / artifact::compare, text);
  fmt::print("{}", text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enclosure-method laboratory for semilinear inclusions.\n"
               "Worker count may be overridden with ENCLOSURE_WORKERS."};
  app.require_subcommand(1);

  std::string config_path, artifact_dir, output_override;
  auto* run = app.add_subcommand("run", "run a sweep and write the artifacts");
  run->add_option("config", config_path, "YAML config")->required();
  run->add_option("-o,--output", output_override, "override run.output");
  auto* validate = app.add_subcommand("validate", "check a config and print the resolved plan");
  validate->add_option("config", config_path, "YAML config")->required();
  auto* figure = app.add_subcommand("figure", "render figure.svg from a run directory");
  figure->add_option("artifact_dir", artifact_dir, "run directory")->required();
  auto* compare = app.add_subcommand("compare", "compare solver and oracle indicators of a pipelines=both run");
  compare->add_option("artifact_dir", artifact_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, output_override);
    if (*validate) return cmd_validate(config_path);
    if (*figure) return cmd_figure(artifact_dir);
    if (*compare) return cmd_compare(artifact_dir);
  } catch (const ConfigError& e) {
    return report_config_error(e);
  } catch (const InvalidArgument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const NumericFailure& e) {
    fmt::print(stderr, "numeric failure: {}\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}
