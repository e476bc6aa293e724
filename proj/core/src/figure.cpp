#include "enclosure/figure.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include <fmt/format.h>

#include "enclosure/experiment.hpp"

namespace enclosure {

namespace {

constexpr double kCanvas = 600.0;
constexpr double kMargin = 40.0;
constexpr double kLegend = 170.0;

struct View {
  Rect domain;
  double scale = 1.0;

  std::pair<double, double> map(Vec2 p) const {
    return {kMargin + (p.x - domain.x0) * scale, kMargin + (domain.y1 - p.y) * scale};
  }
  std::string pt(Vec2 p) const {
    const auto [x, y] = map(p);
    return fmt::format("{:.3f},{:.3f}", x, y);
  }
};

std::string polygon_points(const View& v, const std::vector<Vec2>& pts) {
  std::string s;
  for (std::size_t k = 0; k < pts.size(); ++k) s += (k ? " " : "") + v.pt(pts[k]);
  return s;
}

/// Segment of the line x . omega = t inside the rectangle (Liang-Barsky on x = omega t + s omega_perp).
std::optional<std::pair<Vec2, Vec2>> clip_line(const Rect& r, Vec2 omega, double t) {
  const Vec2 p0 = omega * t;
  const Vec2 d = rotate90(omega);
  double lo = -1e9, hi = 1e9;
  auto slab = [&](double p, double dp, double a, double b) {
    if (std::abs(dp) < 1e-15) return p >= a && p <= b;
    double s0 = (a - p) / dp, s1 = (b - p) / dp;
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
    return lo < hi;
  };
  if (!slab(p0.x, d.x, r.x0, r.x1) || !slab(p0.y, d.y, r.y0, r.y1)) return std::nullopt;
  return std::make_pair(p0 + d * lo, p0 + d * hi);
}

}  // namespace

std::string render_figure(const ExperimentConfig& config, const std::vector<SupportRow>& support,
                          const HullPolygon& hull) {
  const Scene scene = config.scene();
  const Rect& dom = scene.omega();
  View v{dom, (kCanvas - 2 * kMargin) / std::max(dom.width(), dom.height())};
  const double w = kMargin * 2 + dom.width() * v.scale + kLegend;
  const double h = kMargin * 2 + dom.height() * v.scale;

  std::string s;
  s += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}" viewBox="0 0 {:.0f} {:.0f}">)",
                   w, h, w, h);
  s += "\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += fmt::format(R"(<polygon class="domain" points="{}" fill="none" stroke="black" stroke-width="1.5"/>)",
                   polygon_points(v, {{dom.x0, dom.y0}, {dom.x1, dom.y0}, {dom.x1, dom.y1}, {dom.x0, dom.y1}}));
  s += "\n";

  for (const auto& inc : scene.inclusions()) {
    if (const auto* d = std::get_if<Disk>(&inc.shape)) {
      const auto [cx, cy] = v.map(d->center);
      s += fmt::format(R"(<circle class="inclusion" cx="{:.3f}" cy="{:.3f}" r="{:.3f}" fill="#f4c7a1" stroke="#c0692a"/>)",
                       cx, cy, d->radius * v.scale);
    } else if (const auto* a = std::get_if<AxisRect>(&inc.shape)) {
      s += fmt::format(R"(<polygon class="inclusion" points="{}" fill="#f4c7a1" stroke="#c0692a"/>)",
                       polygon_points(v, {a->lo, {a->hi.x, a->lo.y}, a->hi, {a->lo.x, a->hi.y}}));
    } else {
      s += fmt::format(R"(<polygon class="inclusion" points="{}" fill="#f4c7a1" stroke="#c0692a"/>)",
                       polygon_points(v, std::get<ConvexPolygon>(inc.shape).vertices));
    }
    s += "\n";
  }

  for (const auto& row : support) {
    if (row.verdict == "Failed") continue;
    const Vec2 omega = direction_from_angle(row.theta);
    const auto seg = clip_line(dom, omega, row.t_hat);
    if (!seg) continue;
    s += fmt::format(R"(<line class="support-line" x1="{:.3f}" y1="{:.3f}" x2="{:.3f}" y2="{:.3f}" stroke="#3b6fb6" stroke-opacity="0.3"/>)",
                     v.map(seg->first).first, v.map(seg->first).second, v.map(seg->second).first,
                     v.map(seg->second).second);
    s += "\n";
  }

  if (!scene.inclusions().empty()) {
    const HullPolygon truth = true_convex_hull(scene);
    s += fmt::format(R"(<polygon class="true-hull" points="{}" fill="none" stroke="black" stroke-dasharray="6,4"/>)",
                     polygon_points(v, truth.vertices()));
    s += "\n";
  }
  if (!hull.empty()) {
    s += fmt::format(R"(<polygon class="reconstructed-hull" points="{}" fill="none" stroke="#3b6fb6" stroke-width="2"/>)",
                     polygon_points(v, hull.vertices()));
    s += "\n";
  }

  const Vec2 center{0.5 * (dom.x0 + dom.x1), 0.5 * (dom.y0 + dom.y1)};
  const double reach = 0.5 * std::min(dom.width(), dom.height());
  bool any_failed = false;
  for (const auto& row : support) {
    if (row.verdict != "Failed") continue;
    any_failed = true;
    const Vec2 tip = center + direction_from_angle(row.theta) * (0.95 * reach);
    const auto [x, y] = v.map(tip);
    s += fmt::format(R"(<g class="failed-direction"><circle cx="{:.3f}" cy="{:.3f}" r="5" fill="none" stroke="red"/><text x="{:.3f}" y="{:.3f}" font-size="10" fill="red">{}</text></g>)",
                     x, y, x + 7, y - 7, row.dir_index);
    s += "\n";
  }

  const double lx = kMargin * 1.5 + dom.width() * v.scale;
  double ly = kMargin + 10;
  auto legend = [&](const std::string& text, const std::string& style) {
    s += fmt::format(R"(<line x1="{:.1f}" y1="{:.1f}" x2="{:.1f}" y2="{:.1f}" {}/>)", lx, ly - 4, lx + 24, ly - 4, style);
    s += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-size="12">{}</text>)", lx + 30, ly, text);
    s += "\n";
    ly += 20;
  };
  legend("true convex hull", R"(stroke="black" stroke-dasharray="6,4")");
  legend("reconstructed hull", R"(stroke="#3b6fb6" stroke-width="2")");
  legend("support lines", R"(stroke="#3b6fb6" stroke-opacity="0.3")");
  if (any_failed) legend("failed direction", R"(stroke="red")");
  if (hull.empty() && !any_failed) {
    s += fmt::format(R"(<text class="no-inclusion" x="{:.1f}" y="{:.1f}" font-size="12">no inclusion detected</text>)", lx,
                     ly);
    s += "\n";
  }
  s += "</svg>\n";
  return s;
}

std::filesystem::path emit_figure(const std::filesystem::path& artifact_dir) {
  for (const char* name : {artifact::manifest, artifact::support, artifact::hull})
    if (!std::filesystem::exists(artifact_dir / name))
      throw InvalidArgument("missing artifact: " + (artifact_dir / name).string());
  const ExperimentConfig config = load_config(artifact_dir / artifact::manifest);
  const auto support = read_support_table(artifact_dir / artifact::support);
  const HullPolygon hull = read_hull(artifact_dir / artifact::hull);
  const auto path = artifact_dir / artifact::figure;
  write_text_file(path, render_figure(config, support, hull));
  return path;
}

}  // namespace enclosure
