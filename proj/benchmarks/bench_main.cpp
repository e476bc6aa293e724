#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "enclosure/geometry.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/pde.hpp"

using namespace enclosure;

namespace {

const Rect kUnit{0, 1, 0, 1};

Scene disk_scene() { return Scene(kUnit, ConstantCoefficient{0.0}, {{Disk{{0.5, 0.5}, 0.2}, 1.0}}, 2, 1.0); }

ProbeParams probe(double amplitude = 1.0) { return ProbeParams::make({1, 0}, 0.5, 0.2, 5.5, 2, amplitude); }

void BM_PoissonSolve(benchmark::State& state) {
  const auto lap = DiscreteLaplacian::assemble(Grid::build(kUnit, static_cast<int>(state.range(0))));
  const ComplexField src = sample_field(
      [](Vec2 p) { return Complex(std::sin(std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y)); },
      lap->grid());
  for (auto _ : state) benchmark::DoNotOptimize(solve_poisson(*lap, src));
}
BENCHMARK(BM_PoissonSolve)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const Grid g = Grid::build(kUnit, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(DiscreteLaplacian::assemble(g));
}
BENCHMARK(BM_Assemble)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

// Newton at the ladder's largest amplitude (sup|v| = 0.5)
void BM_Newton(benchmark::State& state) {
  const auto lap = DiscreteLaplacian::assemble(Grid::build(kUnit, static_cast<int>(state.range(0))));
  const Scene s = disk_scene();
  const ComplexField v =
      sample_field(calderon_evaluator(probe(0.5 * std::exp((5.5 - 0.5) / 0.2))).interior, lap->grid());
  for (auto _ : state) benchmark::DoNotOptimize(solve_semilinear_residual(*lap, s, v));
}
BENCHMARK(BM_Newton)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_IndicatorE(benchmark::State& state) {
  const auto scheme = state.range(0) == 0 ? ProbeScheme::grid_harmonic : ProbeScheme::closed_form;
  const auto ctx = SolverContext::create(disk_scene(), 129, {}, scheme);
  for (auto _ : state) benchmark::DoNotOptimize(indicator_E(*ctx, probe()));
  state.SetLabel(to_string(scheme));
}
BENCHMARK(BM_IndicatorE)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const Scene s = disk_scene();
  for (auto _ : state) benchmark::DoNotOptimize(oracle_E_tilde(s, probe(), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Oracle)->Arg(257)->Arg(1025)->Unit(benchmark::kMillisecond);

void BM_Hausdorff(benchmark::State& state) {
  const HullPolygon disk = true_convex_hull(disk_scene());
  std::vector<HalfPlane> planes;
  for (int k = 0; k < 16; ++k) {
    const Vec2 w = direction_from_angle(2 * std::numbers::pi * k / 16);
    planes.push_back({w, *true_support_value(disk_scene(), w) - 0.01});
  }
  const HullPolygon hull = hull_from_halfplanes(kUnit, planes);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance(hull, disk));
}
BENCHMARK(BM_Hausdorff)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
