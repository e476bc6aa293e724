#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace enclosure {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Counterclockwise rotation by 90 degrees.
constexpr Vec2 rotate90(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 direction_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  bool operator==(const Rect&) const = default;
};

struct Disk {
  Vec2 center;
  double radius = 0.0;
};

struct AxisRect {
  Vec2 lo;
  Vec2 hi;
};

/// Convex polygon, vertices in counterclockwise order.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

using Shape = std::variant<Disk, AxisRect, ConvexPolygon>;

bool shape_contains(const Shape& shape, Vec2 p);
/// inf over the closed shape of x . omega
double shape_support_value(const Shape& shape, Vec2 omega);
/// Axis-aligned bounding box of the shape.
Rect shape_bounds(const Shape& shape);
/// Points on the shape boundary; disks are sampled uniformly in angle.
std::vector<Vec2> shape_boundary_points(const Shape& shape, int samples_per_disk);
std::string shape_kind(const Shape& shape);

struct ConstantCoefficient {
  double value = 0.0;
};

/// height * exp(-|x - center|^2 / (2 width^2))
struct GaussianBump {
  Vec2 center;
  double width = 0.1;
  double height = 0.0;
};

using BackgroundCoefficient = std::variant<ConstantCoefficient, GaussianBump>;

double evaluate_background(const BackgroundCoefficient& q0, Vec2 x);

/// One inclusion component with its constant coefficient jump.
struct Inclusion {
  Shape shape;
  double q = 1.0;
};

/// Physical setup: the domain, the known background coefficient, the unknown inclusions,
/// the nonlinearity exponent m and the jump bound mu.
///
/// Construction validates every invariant: inclusions strictly inside the domain, one sign
/// for all inclusion coefficients with |q_D| >= mu, m >= 2.
class Scene {
 public:
  Scene(Rect omega, BackgroundCoefficient q0, std::vector<Inclusion> inclusions, int m,
        double mu);

  /// Same checks as the constructor, collecting every violation instead of throwing.
  static std::vector<std::string> validate(const Rect& omega,
                                           const BackgroundCoefficient& q0,
                                           const std::vector<Inclusion>& inclusions, int m,
                                           double mu);

  const Rect& omega() const { return omega_; }
  const BackgroundCoefficient& background() const { return q0_; }
  const std::vector<Inclusion>& inclusions() const { return inclusions_; }
  int m() const { return m_; }
  double mu() const { return mu_; }
  bool background_is_zero() const;

  /// Copy of this scene with the inclusions removed (the known background model).
  Scene without_inclusions() const;
  /// Copy with one more inclusion.
  Scene with_inclusion(Inclusion inclusion) const;

 private:
  Rect omega_;
  BackgroundCoefficient q0_;
  std::vector<Inclusion> inclusions_;
  int m_;
  double mu_;
};

struct SupportInterval {
  double b = 0.0;  ///< inf over the domain of x . omega
  double B = 0.0;  ///< sup over the domain of x . omega
};

SupportInterval support_interval(const Rect& omega_rect, Vec2 omega);
inline SupportInterval support_interval(const Scene& scene, Vec2 omega) {
  return support_interval(scene.omega(), omega);
}

struct CoefficientSample {
  double q0 = 0.0;
  double qD_chi = 0.0;  ///< chi_D(x) q_D(x)

  double total() const { return q0 + qD_chi; }
};

CoefficientSample coefficient_at(const Scene& scene, Vec2 x);
/// chi_D(x) q_D(x); the first containing inclusion wins where shapes overlap.
double inclusion_coefficient(const Scene& scene, Vec2 x);

/// inf over D of x . omega, or nullopt when the scene has no inclusion.
std::optional<double> true_support_value(const Scene& scene, Vec2 omega);

/// Convex polygon (counterclockwise). An empty vertex list is the distinguished empty result.
class HullPolygon {
 public:
  HullPolygon() = default;
  explicit HullPolygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  bool empty() const { return vertices_.empty(); }
  double area() const;
  /// True when p is inside or within `tol` of the polygon.
  bool contains(Vec2 p, double tol = 0.0) const;

 private:
  std::vector<Vec2> vertices_;
};

/// Half-plane {x : x . omega >= t}.
struct HalfPlane {
  Vec2 omega;
  double t = 0.0;
};

/// Intersection of the half-planes with the domain rectangle. Returns an empty polygon when the
/// intersection is empty. Throws InvalidArgument for fewer than 3 half-planes or when the
/// directions do not span the circle.
HullPolygon hull_from_halfplanes(const Rect& omega_rect, std::span<const HalfPlane> planes);

/// Convex hull of a point set (monotone chain), counterclockwise without collinear points.
HullPolygon convex_hull(std::vector<Vec2> points);

/// Convex hull of all inclusion shapes; disks approximated by `samples_per_disk` boundary points.
HullPolygon true_convex_hull(const Scene& scene, int samples_per_disk = 2048);

/// Symmetric Hausdorff distance between polygon boundaries.
double hausdorff_distance(const HullPolygon& a, const HullPolygon& b);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

}  // namespace enclosure
