#include "enclosure/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "enclosure/errors.hpp"

namespace enclosure {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool polygon_is_convex_ccw(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % n];
    const Vec2 c = v[(i + 2) % n];
    if (cross(b - a, c - b) <= 0.0) return false;
  }
  return true;
}

std::string validate_shape(const Shape& shape) {
  return std::visit(
      Overloaded{
          [](const Disk& d) -> std::string {
            if (!(d.radius > 0.0)) return "disk radius must be positive";
            return {};
          },
          [](const AxisRect& r) -> std::string {
            if (!(r.hi.x > r.lo.x && r.hi.y > r.lo.y)) return "rectangle must have lo < hi";
            return {};
          },
          [](const ConvexPolygon& p) -> std::string {
            if (!polygon_is_convex_ccw(p.vertices))
              return "polygon must have >= 3 vertices, convex, counterclockwise";
            return {};
          },
      },
      shape);
}

}  // namespace

bool shape_contains(const Shape& shape, Vec2 p) {
  return std::visit(Overloaded{
                        [p](const Disk& d) {
                          const Vec2 r = p - d.center;
                          return dot(r, r) <= d.radius * d.radius;
                        },
                        [p](const AxisRect& r) {
                          return p.x >= r.lo.x && p.x <= r.hi.x && p.y >= r.lo.y && p.y <= r.hi.y;
                        },
                        [p](const ConvexPolygon& poly) {
                          const auto& v = poly.vertices;
                          for (std::size_t i = 0; i < v.size(); ++i) {
                            const Vec2 a = v[i];
                            const Vec2 b = v[(i + 1) % v.size()];
                            if (cross(b - a, p - a) < 0.0) return false;
                          }
                          return true;
                        },
                    },
                    shape);
}

double shape_support_value(const Shape& shape, Vec2 omega) {
  return std::visit(Overloaded{
                        [omega](const Disk& d) { return dot(d.center, omega) - d.radius; },
                        [omega](const AxisRect& r) {
                          return std::min(r.lo.x * omega.x, r.hi.x * omega.x) +
                                 std::min(r.lo.y * omega.y, r.hi.y * omega.y);
                        },
                        [omega](const ConvexPolygon& p) {
                          double best = std::numeric_limits<double>::infinity();
                          for (const Vec2& v : p.vertices) best = std::min(best, dot(v, omega));
                          return best;
                        },
                    },
                    shape);
}

Rect shape_bounds(const Shape& shape) {
  return std::visit(Overloaded{
                        [](const Disk& d) {
                          return Rect{d.center.x - d.radius, d.center.x + d.radius,
                                      d.center.y - d.radius, d.center.y + d.radius};
                        },
                        [](const AxisRect& r) { return Rect{r.lo.x, r.hi.x, r.lo.y, r.hi.y}; },
                        [](const ConvexPolygon& p) {
                          Rect box{std::numeric_limits<double>::infinity(),
                                   -std::numeric_limits<double>::infinity(),
                                   std::numeric_limits<double>::infinity(),
                                   -std::numeric_limits<double>::infinity()};
                          for (const Vec2& v : p.vertices) {
                            box.x0 = std::min(box.x0, v.x);
                            box.x1 = std::max(box.x1, v.x);
                            box.y0 = std::min(box.y0, v.y);
                            box.y1 = std::max(box.y1, v.y);
                          }
                          return box;
                        },
                    },
                    shape);
}

std::vector<Vec2> shape_boundary_points(const Shape& shape, int samples_per_disk) {
  return std::visit(Overloaded{
                        [samples_per_disk](const Disk& d) {
                          std::vector<Vec2> pts;
                          pts.reserve(static_cast<std::size_t>(samples_per_disk));
                          for (int k = 0; k < samples_per_disk; ++k) {
                            const double th = 2.0 * std::numbers::pi * k / samples_per_disk;
                            pts.push_back(d.center + direction_from_angle(th) * d.radius);
                          }
                          return pts;
                        },
                        [](const AxisRect& r) {
                          return std::vector<Vec2>{
                              r.lo, {r.hi.x, r.lo.y}, r.hi, {r.lo.x, r.hi.y}};
                        },
                        [](const ConvexPolygon& p) { return p.vertices; },
                    },
                    shape);
}

std::string shape_kind(const Shape& shape) {
  return std::visit(Overloaded{
                        [](const Disk&) { return std::string("disk"); },
                        [](const AxisRect&) { return std::string("rect"); },
                        [](const ConvexPolygon&) { return std::string("polygon"); },
                    },
                    shape);
}

double evaluate_background(const BackgroundCoefficient& q0, Vec2 x) {
  return std::visit(Overloaded{
                        [](const ConstantCoefficient& c) { return c.value; },
                        [x](const GaussianBump& g) {
                          const Vec2 r = x - g.center;
                          return g.height * std::exp(-dot(r, r) / (2.0 * g.width * g.width));
                        },
                    },
                    q0);
}

Scene::Scene(Rect omega, BackgroundCoefficient q0, std::vector<Inclusion> inclusions, int m,
             double mu)
    : omega_(omega), q0_(q0), inclusions_(std::move(inclusions)), m_(m), mu_(mu) {
  const auto problems = validate(omega_, q0_, inclusions_, m_, mu_);
  if (!problems.empty()) {
    std::string msg = "invalid scene:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InvalidArgument(msg);
  }
}

std::vector<std::string> Scene::validate(const Rect& omega, const BackgroundCoefficient& q0,
                                         const std::vector<Inclusion>& inclusions, int m,
                                         double mu) {
  std::vector<std::string> problems;
  if (!(omega.x1 > omega.x0 && omega.y1 > omega.y0))
    problems.emplace_back("domain: rectangle must satisfy x0 < x1 and y0 < y1");
  if (m < 2) problems.emplace_back("m must be >= 2");
  if (!(mu > 0.0)) problems.emplace_back("mu must be positive");
  if (const auto* g = std::get_if<GaussianBump>(&q0)) {
    if (!(g->width > 0.0)) problems.emplace_back("background: gaussian width must be positive");
    if (!std::isfinite(g->height)) problems.emplace_back("background: height must be finite");
  } else if (!std::isfinite(std::get<ConstantCoefficient>(q0).value)) {
    problems.emplace_back("background: value must be finite");
  }
  int sign = 0;
  for (std::size_t k = 0; k < inclusions.size(); ++k) {
    const auto& inc = inclusions[k];
    const std::string where = "inclusion " + std::to_string(k) + ": ";
    if (auto err = validate_shape(inc.shape); !err.empty()) {
      problems.push_back(where + err);
      continue;
    }
    const Rect box = shape_bounds(inc.shape);
    if (!(box.x0 > omega.x0 && box.x1 < omega.x1 && box.y0 > omega.y0 && box.y1 < omega.y1))
      problems.push_back(where + "must lie strictly inside the domain");
    if (!std::isfinite(inc.q) || std::abs(inc.q) < mu)
      problems.push_back(where + "|q_D| must be >= mu");
    const int s = inc.q > 0.0 ? 1 : (inc.q < 0.0 ? -1 : 0);
    if (sign == 0) {
      sign = s;
    } else if (s != 0 && s != sign) {
      problems.push_back(where + "q_D must have the same sign on all of D");
    }
  }
  return problems;
}

bool Scene::background_is_zero() const {
  if (const auto* c = std::get_if<ConstantCoefficient>(&q0_)) return c->value == 0.0;
  return std::get<GaussianBump>(q0_).height == 0.0;
}

Scene Scene::without_inclusions() const { return Scene(omega_, q0_, {}, m_, mu_); }

Scene Scene::with_inclusion(Inclusion inclusion) const {
  auto inc = inclusions_;
  inc.push_back(std::move(inclusion));
  return Scene(omega_, q0_, std::move(inc), m_, mu_);
}

SupportInterval support_interval(const Rect& r, Vec2 omega) {
  if (std::abs(norm(omega) - 1.0) > 1e-12)
    throw InvalidArgument("support_interval: direction must be a unit vector");
  const double xs[2] = {r.x0 * omega.x, r.x1 * omega.x};
  const double ys[2] = {r.y0 * omega.y, r.y1 * omega.y};
  return {std::min(xs[0], xs[1]) + std::min(ys[0], ys[1]),
          std::max(xs[0], xs[1]) + std::max(ys[0], ys[1])};
}

double inclusion_coefficient(const Scene& scene, Vec2 x) {
  for (const auto& inc : scene.inclusions())
    if (shape_contains(inc.shape, x)) return inc.q;
  return 0.0;
}

CoefficientSample coefficient_at(const Scene& scene, Vec2 x) {
  if (!scene.omega().contains(x)) throw InvalidArgument("coefficient_at: point outside the domain");
  return {evaluate_background(scene.background(), x), inclusion_coefficient(scene, x)};
}

std::optional<double> true_support_value(const Scene& scene, Vec2 omega) {
  if (scene.inclusions().empty()) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& inc : scene.inclusions())
    best = std::min(best, shape_support_value(inc.shape, omega));
  return best;
}

HullPolygon::HullPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {}

double HullPolygon::area() const {
  double a = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    a += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
  return 0.5 * a;
}

bool HullPolygon::contains(Vec2 p, double tol) const {
  if (vertices_.size() < 3) return false;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 b = vertices_[(i + 1) % vertices_.size()];
    const Vec2 e = b - a;
    // signed distance of p to the edge line, positive inside
    if (cross(e, p - a) / norm(e) < -tol) return false;
  }
  return true;
}

HullPolygon hull_from_halfplanes(const Rect& r, std::span<const HalfPlane> planes) {
  if (planes.size() < 3) throw InvalidArgument("hull_from_halfplanes: need at least 3 directions");
  std::vector<double> angles;
  angles.reserve(planes.size());
  for (const auto& p : planes) {
    if (std::abs(norm(p.omega) - 1.0) > 1e-12)
      throw InvalidArgument("hull_from_halfplanes: directions must be unit vectors");
    angles.push_back(std::atan2(p.omega.y, p.omega.x));
  }
  std::sort(angles.begin(), angles.end());
  double max_gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
  if (max_gap >= std::numbers::pi)
    throw InvalidArgument("hull_from_halfplanes: directions do not span the circle");

  std::vector<Vec2> poly{{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
  const double scale = std::max(r.width(), r.height());
  const double eps = 1e-14 * scale;
  for (const auto& hp : planes) {
    if (poly.empty()) break;
    std::vector<Vec2> out;
    out.reserve(poly.size() + 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 a = poly[i];
      const Vec2 b = poly[(i + 1) % poly.size()];
      const double da = dot(a, hp.omega) - hp.t;
      const double db = dot(b, hp.omega) - hp.t;
      if (da >= 0.0) out.push_back(a);
      if ((da >= 0.0) != (db >= 0.0)) {
        const double s = da / (da - db);
        out.push_back(a + (b - a) * s);
      }
    }
    // drop consecutive duplicates created by clipping through a vertex
    std::vector<Vec2> cleaned;
    for (const Vec2& p : out) {
      if (cleaned.empty() || norm(p - cleaned.back()) > eps) cleaned.push_back(p);
    }
    while (cleaned.size() > 1 && norm(cleaned.front() - cleaned.back()) <= eps) cleaned.pop_back();
    poly = std::move(cleaned);
  }
  if (poly.size() < 3) return {};
  HullPolygon hull(std::move(poly));
  if (!(hull.area() > eps * scale)) return {};
  return hull;
}

HullPolygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {};
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) return {};
  return HullPolygon(std::move(h));
}

HullPolygon true_convex_hull(const Scene& scene, int samples_per_disk) {
  std::vector<Vec2> pts;
  for (const auto& inc : scene.inclusions()) {
    auto b = shape_boundary_points(inc.shape, samples_per_disk);
    pts.insert(pts.end(), b.begin(), b.end());
  }
  return convex_hull(std::move(pts));
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double len2 = dot(e, e);
  double s = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return norm(p - (a + e * s));
}

namespace {

double distance_to_boundary(Vec2 p, const std::vector<Vec2>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

// Upper bound of the distance to b's boundary over the segment [p, q]: each edge distance is
// convex along the segment, so their minimum is bounded by the smallest endpoint maximum.
double segment_bound(Vec2 p, Vec2 q, const std::vector<Vec2>& b) {
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Vec2 u = b[i];
    const Vec2 w = b[(i + 1) % b.size()];
    bound = std::min(bound, std::max(point_segment_distance(p, u, w), point_segment_distance(q, u, w)));
  }
  return bound;
}

// sup over the boundary of a of the distance to the boundary of b, by branch-and-bound on edge
// intervals with the convexity bound above and the 1-Lipschitz bound.
double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  struct Interval {
    Vec2 p0, p1;
    double f0, f1;
  };
  double perimeter = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) perimeter += norm(a[(i + 1) % a.size()] - a[i]);
  constexpr int kMinSamples = 1024;
  const double spacing = perimeter / kMinSamples;

  std::vector<Interval> stack;
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 p = a[i];
    const Vec2 q = a[(i + 1) % a.size()];
    const int pieces = std::max(1, static_cast<int>(std::ceil(norm(q - p) / spacing)));
    Vec2 prev = p;
    double fprev = distance_to_boundary(p, b);
    best = std::max(best, fprev);
    for (int k = 1; k <= pieces; ++k) {
      const Vec2 cur = k == pieces ? q : p + (q - p) * (static_cast<double>(k) / pieces);
      const double fcur = distance_to_boundary(cur, b);
      best = std::max(best, fcur);
      stack.push_back({prev, cur, fprev, fcur});
      prev = cur;
      fprev = fcur;
    }
  }
  constexpr double kTol = 1e-14;
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const double len = norm(iv.p1 - iv.p0);
    if (0.5 * (iv.f0 + iv.f1 + len) <= best + kTol || len < 1e-15) continue;
    if (segment_bound(iv.p0, iv.p1, b) <= best + kTol) continue;
    const Vec2 mid = (iv.p0 + iv.p1) * 0.5;
    const double fm = distance_to_boundary(mid, b);
    best = std::max(best, fm);
    stack.push_back({iv.p0, mid, iv.f0, fm});
    stack.push_back({mid, iv.p1, fm, iv.f1});
  }
  return best;
}

}  // namespace

double hausdorff_distance(const HullPolygon& a, const HullPolygon& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("hausdorff_distance: empty polygon");
  return std::max(directed_hausdorff(a.vertices(), b.vertices()),
                  directed_hausdorff(b.vertices(), a.vertices()));
}

}  // namespace enclosure
