#include "enclosure/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "enclosure/probe.hpp"
#include "enclosure/tables.hpp"

namespace enclosure {

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out = "invalid configuration:";
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

/// Typed accessors that record an error and return a fallback instead of throwing.
class Reader {
 public:
  std::vector<std::string> errors;

  void error(const std::string& msg) { errors.push_back(msg); }

  void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
    if (!node.IsMap()) return;
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) error(fmt::format("{}: unknown key '{}'", where, key));
    }
  }

  bool is_map(const YAML::Node& node, const std::string& where) {
    if (!node) return false;
    if (!node.IsMap()) {
      error(where + " must be a mapping");
      return false;
    }
    return true;
  }

  template <class T>
  T get(const YAML::Node& parent, const std::string& key, const std::string& where, T fallback) {
    const YAML::Node n = parent[key];
    if (!n) return fallback;
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      error(fmt::format("{}.{}: expected {}", where, key, type_name<T>()));
      return fallback;
    }
  }

  template <class T>
  T require(const YAML::Node& parent, const std::string& key, const std::string& where, T fallback) {
    if (!parent[key]) {
      error(fmt::format("{}.{} is required", where, key));
      return fallback;
    }
    return get<T>(parent, key, where, fallback);
  }

  Vec2 vec2(const YAML::Node& parent, const std::string& key, const std::string& where) {
    const auto v = require<std::vector<double>>(parent, key, where, {});
    if (v.size() != 2) {
      if (parent[key]) error(fmt::format("{}.{}: expected [x, y]", where, key));
      return {};
    }
    return {v[0], v[1]};
  }

 private:
  template <class T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, int>) return "an integer";
    else if constexpr (std::is_same_v<T, double>) return "a number";
    else if constexpr (std::is_same_v<T, bool>) return "true or false";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "a list of numbers";
  }
};

std::optional<double> auto_or_number(Reader& r, const YAML::Node& parent, const std::string& key,
                                     const std::string& where, std::optional<double> fallback) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  if (n.IsScalar() && n.Scalar() == "auto") return std::nullopt;
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    r.error(fmt::format("{}.{}: expected a number or \"auto\"", where, key));
    return fallback;
  }
}

void parse_scene(Reader& r, const YAML::Node& s, ExperimentConfig& c) {
  const std::string w = "scene";
  r.check_keys(s, w, {"domain", "m", "mu", "background", "inclusions"});
  if (s["domain"]) {
    const auto d = r.get<std::vector<double>>(s, "domain", w, {});
    if (d.size() == 4)
      c.domain = Rect{d[0], d[1], d[2], d[3]};
    else
      r.error("scene.domain: expected [x0, x1, y0, y1]");
  }
  c.m = r.require<int>(s, "m", w, c.m);
  c.mu = r.get<double>(s, "mu", w, c.mu);

  if (const YAML::Node b = s["background"]) {
    if (b.IsScalar()) {
      c.background = ConstantCoefficient{r.get<double>(s, "background", w, 0.0)};
    } else if (r.is_map(b, "scene.background")) {
      const std::string bw = "scene.background";
      const auto type = r.require<std::string>(b, "type", bw, "constant");
      if (type == "constant") {
        r.check_keys(b, bw, {"type", "value"});
        c.background = ConstantCoefficient{r.get<double>(b, "value", bw, 0.0)};
      } else if (type == "gaussian") {
        r.check_keys(b, bw, {"type", "center", "width", "height"});
        GaussianBump g;
        g.center = r.vec2(b, "center", bw);
        g.width = r.require<double>(b, "width", bw, g.width);
        g.height = r.require<double>(b, "height", bw, g.height);
        if (!(g.width > 0.0)) r.error("scene.background.width must be > 0");
        c.background = g;
      } else {
        r.error(fmt::format("scene.background.type: unknown type '{}' (expected constant | gaussian)", type));
      }
    }
  }

  c.inclusions.clear();
  if (const YAML::Node inc = s["inclusions"]) {
    if (!inc.IsSequence()) {
      r.error("scene.inclusions must be a list");
      return;
    }
    for (std::size_t k = 0; k < inc.size(); ++k) {
      const std::string iw = fmt::format("scene.inclusions[{}]", k);
      const YAML::Node n = inc[k];
      if (!r.is_map(n, iw)) continue;
      const auto shape = r.require<std::string>(n, "shape", iw, "");
      Inclusion in;
      in.q = r.require<double>(n, "q", iw, 1.0);
      if (shape == "disk") {
        r.check_keys(n, iw, {"shape", "q", "center", "radius"});
        in.shape = Disk{r.vec2(n, "center", iw), r.require<double>(n, "radius", iw, 0.0)};
      } else if (shape == "rect") {
        r.check_keys(n, iw, {"shape", "q", "min", "max"});
        in.shape = AxisRect{r.vec2(n, "min", iw), r.vec2(n, "max", iw)};
      } else if (shape == "polygon") {
        r.check_keys(n, iw, {"shape", "q", "vertices"});
        ConvexPolygon poly;
        const YAML::Node vs = n["vertices"];
        if (!vs || !vs.IsSequence()) {
          r.error(iw + ".vertices: expected a list of [x, y]");
        } else {
          for (const auto& v : vs) {
            try {
              const auto xy = v.as<std::vector<double>>();
              if (xy.size() != 2) throw YAML::Exception(YAML::Mark(), "size");
              poly.vertices.push_back({xy[0], xy[1]});
            } catch (const YAML::Exception&) {
              r.error(iw + ".vertices: expected a list of [x, y]");
              break;
            }
          }
        }
        in.shape = poly;
      } else {
        if (n["shape"]) r.error(fmt::format("{}.shape: unknown shape '{}' (expected disk | rect | polygon)", iw, shape));
        continue;
      }
      c.inclusions.push_back(std::move(in));
    }
  }
}

void parse_probe(Reader& r, const YAML::Node& p, ExperimentConfig& c) {
  const std::string w = "probe";
  r.check_keys(p, w, {"J", "h", "directions", "method", "t_fraction", "bisect", "dead_band", "prefactor", "amplitude"});
  c.J = auto_or_number(r, p, "J", w, c.J);
  if (const YAML::Node h = p["h"]) {
    if (h.IsScalar() && h.Scalar() == "auto")
      c.h.clear();
    else
      c.h = r.get<std::vector<double>>(p, "h", w, {});
  }
  c.directions = r.get<int>(p, "directions", w, c.directions);
  if (p["method"]) {
    try {
      c.method = method_from_string(r.get<std::string>(p, "method", w, "slope"));
    } catch (const InvalidArgument& e) {
      r.error(std::string("probe.method: ") + e.what());
    }
  }
  c.t_fraction = r.get<double>(p, "t_fraction", w, c.t_fraction);
  if (const YAML::Node b = p["bisect"]; r.is_map(b, "probe.bisect")) {
    r.check_keys(b, "probe.bisect", {"margin", "tol"});
    c.bisect_margin = r.get<double>(b, "margin", "probe.bisect", c.bisect_margin);
    c.bisect_tol = r.get<double>(b, "tol", "probe.bisect", c.bisect_tol);
  }
  c.dead_band = auto_or_number(r, p, "dead_band", w, c.dead_band);
  if (p["prefactor"]) {
    try {
      c.prefactor = prefactor_model_from_string(r.get<std::string>(p, "prefactor", w, "log_linear"));
    } catch (const InvalidArgument& e) {
      r.error(std::string("probe.prefactor: ") + e.what());
    }
  }
  c.amplitude = r.get<double>(p, "amplitude", w, c.amplitude);
}

void parse_run(Reader& r, const YAML::Node& n, ExperimentConfig& c) {
  const std::string w = "run";
  r.check_keys(n, w, {"output", "workers", "deterministic", "pipelines"});
  c.output = r.get<std::string>(n, "output", w, c.output.string());
  c.workers = r.get<int>(n, "workers", w, c.workers);
  c.deterministic = r.get<bool>(n, "deterministic", w, c.deterministic);
  if (n["pipelines"]) {
    try {
      c.pipeline = pipeline_from_string(r.get<std::string>(n, "pipelines", w, "solver"));
    } catch (const InvalidArgument& e) {
      r.error(std::string("run.pipelines: ") + e.what());
    }
  }
}

void parse_ladder(Reader& r, const YAML::Node& n, ExperimentConfig& c) {
  const std::string w = "ladder";
  r.check_keys(n, w, {"theta", "t", "h", "target_sup", "scales"});
  LadderConfig l;
  l.theta = r.get<double>(n, "theta", w, l.theta);
  l.t = r.get<double>(n, "t", w, l.t);
  l.h = r.get<double>(n, "h", w, l.h);
  l.target_sup = r.get<double>(n, "target_sup", w, l.target_sup);
  l.scales = r.get<std::vector<double>>(n, "scales", w, l.scales);
  c.ladder = l;
}

std::vector<Vec2> requested_directions(const ExperimentConfig& c) {
  std::vector<Vec2> dirs;
  for (int k = 0; k < c.directions; ++k) dirs.push_back(direction_from_angle(2.0 * std::numbers::pi * k / c.directions));
  if (c.ladder) dirs.push_back(direction_from_angle(c.ladder->theta));
  return dirs;
}

std::string yaml_vector(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_double(v[k]);
  return s + "]";
}

std::string yaml_vec2(Vec2 p) { return fmt::format("[{}, {}]", format_double(p.x), format_double(p.y)); }

std::string yaml_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors) : InvalidArgument(join(errors)), errors_(std::move(errors)) {}

Scene ExperimentConfig::scene() const { return Scene(domain, background, inclusions, m, mu); }

double ExperimentConfig::resolved_J() const {
  if (J) return *J;
  double worst = 0.0;
  for (Vec2 w : requested_directions(*this)) {
    const SupportInterval si = support_interval(domain, w);
    worst = std::max(worst, min_admissible_J(m, si.b, si.B));
  }
  return 1.1 * worst;
}

std::vector<double> ExperimentConfig::resolved_h() const { return h.empty() ? default_h_grid() : h; }

double ExperimentConfig::resolved_dead_band() const { return dead_band ? *dead_band : default_dead_band(m); }

ProbePlan ExperimentConfig::plan() const {
  ProbePlan p;
  p.m = m;
  p.J = resolved_J();
  p.amplitude = amplitude;
  p.h_grid = resolved_h();
  p.dead_band = resolved_dead_band();
  p.model = prefactor;
  return p;
}

ReconstructionParams ExperimentConfig::reconstruction_params() const {
  ReconstructionParams r;
  r.directions = directions;
  r.method = method;
  r.plan = plan();
  r.t_fraction = t_fraction;
  r.bisect_margin = bisect_margin;
  r.bisect_tol = bisect_tol;
  r.workers = workers;
  r.throw_on_failure = false;
  return r;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> errs;
  for (const auto& e : Scene::validate(c.domain, c.background, c.inclusions, c.m, c.mu)) errs.push_back("scene: " + e);
  if (c.grid_n < 9 || c.grid_n % 2 == 0) errs.push_back("grid.n must be an odd integer >= 9");
  if (c.oracle_quad_n < 3) errs.push_back("grid.oracle_quad_n must be >= 3");
  if (c.directions < 8) errs.push_back("probe.directions must be >= 8");
  if (c.m >= 2 && c.J) {
    if (!(*c.J > 0.0)) {
      errs.push_back("probe.J must be > 0");
    } else {
      for (Vec2 w : requested_directions(c)) {
        const SupportInterval si = support_interval(c.domain, w);
        const double lo = min_admissible_J(c.m, si.b, si.B);
        if (!(*c.J > lo)) {
          errs.push_back(fmt::format("probe.J = {} violates the J-rule: directions used need J > {}", format_double(*c.J),
                                     format_double(lo)));
          break;
        }
      }
    }
  }
  for (double h : c.h)
    if (!(h > 0.0) || !std::isfinite(h)) {
      errs.push_back("probe.h values must be positive");
      break;
    }
  if (!c.h.empty() && std::set<double>(c.h.begin(), c.h.end()).size() < 3)
    errs.push_back("probe.h needs at least 3 distinct values");
  if (!(c.t_fraction > 0.0 && c.t_fraction < 1.0)) errs.push_back("probe.t_fraction must lie in (0, 1)");
  if (!(c.bisect_margin >= 0.0)) errs.push_back("probe.bisect.margin must be >= 0");
  if (!(c.bisect_tol > 0.0)) errs.push_back("probe.bisect.tol must be > 0");
  if (c.dead_band && !(*c.dead_band >= 0.0)) errs.push_back("probe.dead_band must be >= 0");
  if (!(c.amplitude > 0.0) || !std::isfinite(c.amplitude)) errs.push_back("probe.amplitude must be > 0");
  if (c.output.empty()) errs.push_back("run.output must not be empty");
  if (c.workers < 1) errs.push_back("run.workers must be >= 1");
  if (c.ladder) {
    const LadderConfig& l = *c.ladder;
    if (c.pipeline == Pipeline::oracle) errs.push_back("ladder requires the solver pipeline (run.pipelines: solver | both)");
    if (!(l.h > 0.0)) errs.push_back("ladder.h must be > 0");
    if (!(l.target_sup > 0.0)) errs.push_back("ladder.target_sup must be > 0");
    if (l.scales.size() < 2) errs.push_back("ladder.scales needs at least 2 values");
    for (double s : l.scales)
      if (!(s > 0.0)) {
        errs.push_back("ladder.scales must be positive");
        break;
      }
    const SupportInterval si = support_interval(c.domain, direction_from_angle(l.theta));
    if (!(l.t > si.b && l.t < si.B)) errs.push_back("ladder.t must lie strictly inside the domain's projection");
  }
  return errs;
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("YAML syntax error: ") + e.what()});
  }
  if (!root.IsMap()) throw ConfigError({"top level must be a mapping"});

  Reader r;
  ExperimentConfig c;
  r.check_keys(root, "config", {"scene", "grid", "probe", "run", "ladder", "run_info"});
  if (const YAML::Node s = root["scene"]; r.is_map(s, "scene"))
    parse_scene(r, s, c);
  else if (!s)
    r.error("scene block is required");
  if (const YAML::Node g = root["grid"]; r.is_map(g, "grid")) {
    r.check_keys(g, "grid", {"n", "oracle_quad_n", "probe_scheme"});
    c.grid_n = r.get<int>(g, "n", "grid", c.grid_n);
    c.oracle_quad_n = r.get<int>(g, "oracle_quad_n", "grid", c.oracle_quad_n);
    if (g["probe_scheme"]) {
      try {
        c.probe_scheme = probe_scheme_from_string(r.get<std::string>(g, "probe_scheme", "grid", "grid_harmonic"));
      } catch (const InvalidArgument& e) {
        r.error(std::string("grid.probe_scheme: ") + e.what());
      }
    }
  }
  if (const YAML::Node p = root["probe"]; r.is_map(p, "probe")) parse_probe(r, p, c);
  if (const YAML::Node n = root["run"]; r.is_map(n, "run")) parse_run(r, n, c);
  if (const YAML::Node l = root["ladder"]; r.is_map(l, "ladder")) parse_ladder(r, l, c);

  if (r.errors.empty()) r.errors = validate_config(c);
  if (!r.errors.empty()) throw ConfigError(r.errors);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_yaml(const ExperimentConfig& c, const std::string& extra) {
  std::string y;
  auto line = [&](const std::string& s) { y += s + "\n"; };
  line("scene:");
  line(fmt::format("  domain: {}", yaml_vector({c.domain.x0, c.domain.x1, c.domain.y0, c.domain.y1})));
  line(fmt::format("  m: {}", c.m));
  line(fmt::format("  mu: {}", format_double(c.mu)));
  if (const auto* k = std::get_if<ConstantCoefficient>(&c.background)) {
    line(fmt::format("  background: {{type: constant, value: {}}}", format_double(k->value)));
  } else {
    const auto& g = std::get<GaussianBump>(c.background);
    line(fmt::format("  background: {{type: gaussian, center: {}, width: {}, height: {}}}", yaml_vec2(g.center),
                     format_double(g.width), format_double(g.height)));
  }
  if (c.inclusions.empty()) {
    line("  inclusions: []");
  } else {
    line("  inclusions:");
    for (const auto& in : c.inclusions) {
      if (const auto* d = std::get_if<Disk>(&in.shape)) {
        line(fmt::format("    - {{shape: disk, center: {}, radius: {}, q: {}}}", yaml_vec2(d->center),
                         format_double(d->radius), format_double(in.q)));
      } else if (const auto* a = std::get_if<AxisRect>(&in.shape)) {
        line(fmt::format("    - {{shape: rect, min: {}, max: {}, q: {}}}", yaml_vec2(a->lo), yaml_vec2(a->hi),
                         format_double(in.q)));
      } else {
        const auto& poly = std::get<ConvexPolygon>(in.shape);
        std::string vs = "[";
        for (std::size_t k = 0; k < poly.vertices.size(); ++k) vs += (k ? ", " : "") + yaml_vec2(poly.vertices[k]);
        line(fmt::format("    - {{shape: polygon, vertices: {}], q: {}}}", vs, format_double(in.q)));
      }
    }
  }
  line("grid:");
  line(fmt::format("  n: {}", c.grid_n));
  line(fmt::format("  oracle_quad_n: {}", c.oracle_quad_n));
  line(fmt::format("  probe_scheme: {}", to_string(c.probe_scheme)));
  line("probe:");
  line(fmt::format("  J: {}", format_double(c.resolved_J())));
  line(fmt::format("  h: {}", yaml_vector(c.resolved_h())));
  line(fmt::format("  directions: {}", c.directions));
  line(fmt::format("  method: {}", to_string(c.method)));
  line(fmt::format("  t_fraction: {}", format_double(c.t_fraction)));
  line(fmt::format("  bisect: {{margin: {}, tol: {}}}", format_double(c.bisect_margin), format_double(c.bisect_tol)));
  line(fmt::format("  dead_band: {}", format_double(c.resolved_dead_band())));
  line(fmt::format("  prefactor: {}", to_string(c.prefactor)));
  line(fmt::format("  amplitude: {}", format_double(c.amplitude)));
  line("run:");
  line(fmt::format("  output: {}", yaml_quote(c.output.string())));
  line(fmt::format("  workers: {}", c.workers));
  line(fmt::format("  deterministic: {}", c.deterministic ? "true" : "false"));
  line(fmt::format("  pipelines: {}", to_string(c.pipeline)));
  if (c.ladder) {
    const LadderConfig& l = *c.ladder;
    line("ladder:");
    line(fmt::format("  theta: {}", format_double(l.theta)));
    line(fmt::format("  t: {}", format_double(l.t)));
    line(fmt::format("  h: {}", format_double(l.h)));
    line(fmt::format("  target_sup: {}", format_double(l.target_sup)));
    line(fmt::format("  scales: {}", yaml_vector(l.scales)));
  }
  return y + extra;
}

}  // namespace enclosure
