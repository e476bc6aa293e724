// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "enclosure/compare.hpp"
#include "enclosure/config.hpp"
#include "enclosure/experiment.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/pde.hpp"
#include "enclosure/reconstruct.hpp"

using namespace enclosure;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const Rect kUnit{0, 1, 0, 1};
constexpr int kN = 129;
constexpr int kQuadN = 1025;
constexpr double kStandardJ = 5.5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Newton iteration counts of every solver probe evaluated by the suite.
int g_max_newton = 0;
int g_solver_probes = 0;

void note_newton(const NewtonReport& r) {
  g_max_newton = std::max(g_max_newton, r.iterations);
  ++g_solver_probes;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Scene disk_phantom(int m = 2) {
  return Scene(kUnit, ConstantCoefficient{0.0}, {{Disk{{0.5, 0.5}, 0.2}, 1.0}}, m, 1.0);
}

Scene two_disk_phantom() {
  return Scene(kUnit, ConstantCoefficient{0.0},
               {{Disk{{0.35, 0.35}, 0.12}, 1.0}, {Disk{{0.65, 0.62}, 0.10}, 1.0}}, 2, 1.0);
}

Scene empty_phantom() { return Scene(kUnit, ConstantCoefficient{0.0}, {}, 2, 1.0); }

Vec2 direction(int k, int K) { return direction_from_angle(2 * kPi * k / K); }

/// 1.1 x the smallest admissible J over all directions of the unit square (the diagonal).
double auto_J(int m) { return 1.1 * min_admissible_J(m, 0.0, std::sqrt(2.0)); }

ProbePlan standard_plan(double J) {
  ProbePlan p;
  p.m = 2;
  p.J = J;
  p.h_grid = default_h_grid();
  p.dead_band = default_dead_band(2);
  return p;
}

/// Wraps a solver source and records Newton reports.
class CountingSource final : public IndicatorSource {
 public:
  explicit CountingSource(const IndicatorSource& inner) : inner_(inner) {}
  IndicatorSample sample(const ProbeParams& probe) const override {
    IndicatorSample s = inner_.sample(probe);
    note_newton(s.newton);
    return s;
  }
  const Scene& scene() const override { return inner_.scene(); }
  Pipeline pipeline() const override { return inner_.pipeline(); }

 private:
  const IndicatorSource& inner_;
};

std::shared_ptr<const SolverContext> disk_ctx() {
  static const auto ctx = SolverContext::create(disk_phantom(), kN);
  return ctx;
}

// 1. manufactured solution sin(pi x) sin(pi y)
Outcome poisson_convergence() {
  std::vector<double> dx, err;
  for (int n : {33, 65, 129}) {
    const auto lap = DiscreteLaplacian::assemble(Grid::build(kUnit, n));
    const ComplexField src = sample_field(
        [](Vec2 p) { return Complex(-2 * kPi * kPi * std::sin(kPi * p.x) * std::sin(kPi * p.y)); }, lap->grid());
    const ComplexField exact =
        sample_field([](Vec2 p) { return Complex(std::sin(kPi * p.x) * std::sin(kPi * p.y)); }, lap->grid());
    dx.push_back(lap->grid().spacing());
    err.push_back((solve_poisson(*lap, src) - exact).sup_norm());
  }
  const double order = fit_power_law(dx, err)->exponent;
  const bool ok = std::abs(order - 2.0) <= 0.2 && err.back() < 6e-5;
  return {ok, "order " + fmt("%.4f", order) + " (2.0 +- 0.2), sup error at N=129 " + fmt("%.3e", err.back()) +
                  " (< 6e-5)"};
}

// 2. PDE auxiliary indicator against the closed-form volume integral
Outcome oracle_identity() {
  const double J = auto_J(2);
  double worst_rel = 0.0, worst_imag = 0.0;
  bool signs_ok = true;
  for (int k = 0; k < 8; ++k) {
    const Vec2 w = direction(k, 8);
    const auto si = support_interval(kUnit, w);
    const double t = 0.5 * (si.b + si.B);
    for (double h : {0.3, 0.2, 0.15}) {
      const ProbeParams p = ProbeParams::make(w, t, h, J, 2);
      const Complex pde = indicator_E_tilde(*disk_ctx(), p);
      const Complex orc = oracle_E_tilde(disk_phantom(), p, kQuadN);
      worst_rel = std::max(worst_rel, std::abs(pde - orc) / std::abs(orc));
      worst_imag = std::max(worst_imag, std::abs(pde.imag()) / std::abs(pde));
      signs_ok &= orc.real() < 0.0 && orc.imag() == 0.0;
    }
  }
  const bool ok = worst_rel <= 0.02 && worst_imag <= 1e-4 && signs_ok;
  return {ok, "max |Et_pde - Et_oracle|/|Et_oracle| " + fmt("%.4f", worst_rel) + " (<= 0.02), max |Im|/|Et_pde| " +
                  fmt("%.2e", worst_imag) + " (<= 1e-4), oracle real negative: " + (signs_ok ? "yes" : "no")};
}

// 3. amplitude ladder exponents
Outcome error_ladder() {
  bool ok = true;
  std::string detail;
  for (int m : {2, 3}) {
    const auto ctx = SolverContext::create(disk_phantom(m), kN);
    LadderConfig l;
    const double J = 1.1 * min_admissible_J(m, 0.0, 1.0);
    std::vector<LadderRow> rows = run_ladder(*ctx, l, J);
    for (const auto& r : rows) {
      g_max_newton = std::max(g_max_newton, r.newton_iters);
      ++g_solver_probes;
    }
    const LadderExponents e = ladder_exponents(rows, m);
    const bool have = e.u_minus_v && e.u_minus_ut && e.E_minus_Et && e.E_minus_Et->points >= 2;
    const bool pass = have && std::abs(e.u_minus_v->exponent - m) <= 0.2 &&
                      std::abs(e.u_minus_ut->exponent - (2 * m - 1)) <= 0.3 &&
                      std::abs(e.E_minus_Et->exponent - (3 * m - 1)) <= 0.5;
    ok &= pass;
    if (have)
      detail += "m=" + std::to_string(m) + ": |u-v| " + fmt("%.3f", e.u_minus_v->exponent) + ", |u-ut| " +
                fmt("%.3f", e.u_minus_ut->exponent) + ", |E-Et| " + fmt("%.3f", e.E_minus_Et->exponent) + " (" +
                std::to_string(e.E_minus_Et->points) + " pts); ";
    else
      detail += "m=" + std::to_string(m) + ": too few resolved points; ";
  }
  return {ok, detail + "targets m+-0.2, 2m-1+-0.3, 3m-1+-0.5"};
}

// 4. Miss below t_* and Hit above, 8 directions x 6 thresholds
Outcome dichotomy() {
  const SolverSource solver(disk_ctx());
  const CountingSource counted(solver);
  const OracleSource oracle(disk_phantom(), kQuadN);
  const ProbePlan plan = standard_plan(auto_J(2));
  int correct_solver = 0, correct_oracle = 0, total = 0;
  std::string wrong;
  for (int k = 0; k < 8; ++k) {
    const Vec2 w = direction(k, 8);
    const double ts = *true_support_value(disk_phantom(), w);
    for (double d : {-0.2, -0.1, -0.05, 0.05, 0.1, 0.2}) {
      const Verdict expect = d < 0 ? Verdict::Miss : Verdict::Hit;
      ++total;
      const Verdict vs = classify_halfspace(counted, w, ts + d, plan).verdict;
      const Verdict vo = classify_halfspace(oracle, w, ts + d, plan).verdict;
      if (vs == expect)
        ++correct_solver;
      else
        wrong += " dir" + std::to_string(k) + "/" + fmt("%+.2f", d) + "=" + to_string(vs);
      correct_oracle += vo == expect ? 1 : 0;
    }
  }
  const bool ok = correct_solver == total && correct_oracle == total;
  return {ok, "solver " + std::to_string(correct_solver) + "/" + std::to_string(total) + ", oracle " +
                  std::to_string(correct_oracle) + "/" + std::to_string(total) + wrong};
}

// 5. fitted slope at omega = (1, 0), t = 0.4
Outcome slope_fidelity() {
  const SolverSource solver(disk_ctx());
  const CountingSource counted(solver);
  const OracleSource oracle(disk_phantom(), kQuadN);
  const ProbePlan plan = standard_plan(kStandardJ);
  const double s_solver = classify_halfspace(counted, {1, 0}, 0.4, plan).slope;
  const double s_oracle = classify_halfspace(oracle, {1, 0}, 0.4, plan).slope;
  const bool ok = std::abs(s_solver - 0.4) <= 0.08 && std::abs(s_oracle - 0.4) <= 0.02;
  return {ok, "solver slope " + fmt("%.4f", s_solver) + " (0.4 +- 0.08), oracle slope " + fmt("%.4f", s_oracle) +
                  " (0.4 +- 0.02)"};
}

ReconstructionParams hull_params() {
  ReconstructionParams p;
  p.directions = 16;
  p.method = Method::slope;
  p.plan = standard_plan(auto_J(2));
  return p;
}

double hull_error(const IndicatorSource& src, Method method = Method::slope) {
  ReconstructionParams p = hull_params();
  p.method = method;
  const Reconstruction r = reconstruct_hull(src, p);
  if (r.hull.empty()) return std::numeric_limits<double>::infinity();
  return hausdorff_distance(r.hull, true_convex_hull(src.scene()));
}

// 6. Hausdorff error of the reconstructed hull
Outcome hull_reconstruction() {
  const SolverSource solver(disk_ctx());
  const double e_solver = hull_error(CountingSource(solver));
  const double e_oracle = hull_error(OracleSource(disk_phantom(), kQuadN));
  const SolverSource two(SolverContext::create(two_disk_phantom(), kN));
  const double e_two = hull_error(CountingSource(two));
  // cross-check only: the bisection estimator on the same phantom is reported, not gated
  const double e_bisect = hull_error(CountingSource(solver), Method::bisect);
  const bool ok = e_solver <= 0.05 && e_oracle <= 0.03 && e_two <= 0.06;
  return {ok, "disk solver " + fmt("%.4f", e_solver) + " (<= 0.05), disk oracle " + fmt("%.4f", e_oracle) +
                  " (<= 0.03), two disks solver " + fmt("%.4f", e_two) + " (<= 0.06); bisection cross-check " +
                  fmt("%.4f", e_bisect)};
}

// 7. empty inclusion: every half-plane Miss, empty hull
bool g_zero_coefficient_one_step = true;

Outcome negative_control() {
  const SolverSource solver(SolverContext::create(empty_phantom(), kN));
  const OracleSource oracle(empty_phantom(), kQuadN);
  const ProbePlan plan = standard_plan(auto_J(2));
  int miss = 0, total = 0;
  for (const IndicatorSource* src : {static_cast<const IndicatorSource*>(&solver), static_cast<const IndicatorSource*>(&oracle)}) {
    for (int k = 0; k < 8; ++k) {
      const Vec2 w = direction(k, 8);
      const auto si = support_interval(kUnit, w);
      for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const Decision d = classify_halfspace(*src, w, si.b + f * (si.B - si.b), plan);
        ++total;
        miss += d.verdict == Verdict::Miss ? 1 : 0;
        if (src == &solver)
          for (const auto& s : d.samples) {
            note_newton(s.newton);
            g_zero_coefficient_one_step &= s.newton.iterations == 1;
          }
      }
    }
  }
  const Reconstruction rs = reconstruct_hull(solver, hull_params());
  const Reconstruction ro = reconstruct_hull(oracle, hull_params());
  const bool empty = rs.hull.empty() && rs.no_inclusion && ro.hull.empty() && ro.no_inclusion;
  return {miss == total && empty, "Miss " + std::to_string(miss) + "/" + std::to_string(total) +
                                      " (solver and oracle), empty hull verdict: " + (empty ? "yes" : "no")};
}

// 8. Jacobian check and Newton iteration counts
Outcome newton_jacobian() {
  const auto& lap = disk_ctx()->laplacian();
  const Grid& g = lap.grid();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double a = 0.5 * std::exp((kStandardJ - 0.5) / 0.2);
  const ComplexField v = sample_field(calderon_evaluator(ProbeParams::make({1, 0}, 0.5, 0.2, kStandardJ, 2, a)).interior, g);
  const auto sol = solve_semilinear_residual(lap, disk_ctx()->q_total(), 2, v);
  note_newton(sol.report);
  ComplexField d(g);
  for (auto& c : d.values()) c = Complex(nd(rng), nd(rng)) * 1e-3;
  const JacobianCheck jc = jacobian_check(lap, disk_ctx()->q_total(), 2, v, sol.z, d);
  const bool ok = jc.relative_mismatch <= 1e-6 && g_max_newton <= 5 && g_zero_coefficient_one_step;
  return {ok, "Jacobian mismatch " + fmt("%.2e", jc.relative_mismatch) + " (<= 1e-6), max Newton iterations " +
                  std::to_string(g_max_newton) + " over " + std::to_string(g_solver_probes) +
                  " solver probes (<= 5), q = 0 converges in exactly 1: " +
                  (g_zero_coefficient_one_step ? "yes" : "no")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 9. byte-identical tables across repeated runs and worker counts
Outcome determinism() {
  ExperimentConfig c;
  c.inclusions = {{Disk{{0.5, 0.5}, 0.2}, 1.0}};
  c.grid_n = kN;
  c.directions = 16;
  c.pipeline = Pipeline::solver;
  const fs::path root = fs::current_path() / "acceptance_runs";
  fs::remove_all(root);
  std::vector<fs::path> dirs;
  for (auto [name, workers] : std::vector<std::pair<std::string, int>>{{"first", 1}, {"second", 1}, {"workers8", 8}}) {
    c.output = root / name;
    c.workers = workers;
    run_experiment(c);
    dirs.push_back(c.output);
  }
  bool repeat = true, workers = true;
  for (const char* f : {artifact::indicators, artifact::support, artifact::hull}) {
    const std::string a = slurp(dirs[0] / f);
    repeat &= !a.empty() && a == slurp(dirs[1] / f);
    workers &= a == slurp(dirs[2] / f);
  }
  return {repeat && workers, std::string("repeat run identical: ") + (repeat ? "yes" : "no") +
                                 ", 1 vs 8 workers identical: " + (workers ? "yes" : "no")};
}

}  // namespace

int main() {
  // the worker-count comparison must not be overridden from the environment
  unsetenv("ENCLOSURE_WORKERS");
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // criterion 8 runs last so that it sees the Newton counts of every other solver probe
  const std::vector<Criterion> criteria{
      {1, "Poisson convergence", poisson_convergence},
      {2, "auxiliary indicator vs oracle", oracle_identity},
      {3, "error-order ladder", error_ladder},
      {4, "dichotomy 48/48", dichotomy},
      {5, "slope fidelity", slope_fidelity},
      {6, "hull reconstruction", hull_reconstruction},
      {7, "negative control", negative_control},
      {9, "determinism", determinism},
      {8, "Newton and Jacobian", newton_jacobian},
  };
  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all &= o.pass;
    lines.emplace_back(c.id, std::string(o.pass ? "PASS" : "FAIL") + " [" + std::to_string(c.id) + "] " + c.name +
                                 ": " + o.detail);
    std::fprintf(stderr, "%s\n", lines.back().second.c_str());
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) std::printf("%s\n", l.second.c_str());
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
