#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"

using namespace enclosure;

namespace {

const Rect kUnit{0, 1, 0, 1};

Scene disk_scene(Vec2 c = {0.5, 0.5}, double r = 0.2) {
  return Scene(kUnit, ConstantCoefficient{0.0}, {{Disk{c, r}, 1.0}}, 2, 1.0);
}

HullPolygon square(double lo, double hi) { return HullPolygon({{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}}); }

}  // namespace

TEST(SupportInterval, UnitSquareAxis) {
  const auto si = support_interval(kUnit, {1, 0});
  EXPECT_EQ(si.b, 0.0);
  EXPECT_EQ(si.B, 1.0);
}

TEST(SupportInterval, UnitSquareDiagonal) {
  const auto si = support_interval(kUnit, {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
  EXPECT_NEAR(si.b, 0.0, 1e-15);
  EXPECT_NEAR(si.B, std::sqrt(2.0), 1e-15);
}

TEST(SupportInterval, CenteredSquareDownward) {
  const auto si = support_interval(Rect{-1, 1, -1, 1}, {0, -1});
  EXPECT_EQ(si.b, -1.0);
  EXPECT_EQ(si.B, 1.0);
}

TEST(SupportInterval, RejectsNonUnitDirection) { EXPECT_THROW(support_interval(kUnit, {1, 1}), InvalidArgument); }

TEST(SupportInterval, TranslationShiftsByProjection) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 50; ++k) {
    const Vec2 d{u(rng), u(rng)};
    const Vec2 w = direction_from_angle(u(rng));
    const Rect moved{kUnit.x0 + d.x, kUnit.x1 + d.x, kUnit.y0 + d.y, kUnit.y1 + d.y};
    const auto a = support_interval(kUnit, w);
    const auto b = support_interval(moved, w);
    EXPECT_NEAR(b.b - a.b, dot(d, w), 1e-12);
    EXPECT_NEAR(b.B - a.B, dot(d, w), 1e-12);
  }
}

TEST(CoefficientAt, OutsideInclusionIsZero) {
  const auto c = coefficient_at(disk_scene(), {0.1, 0.1});
  EXPECT_EQ(c.q0, 0.0);
  EXPECT_EQ(c.qD_chi, 0.0);
}

TEST(CoefficientAt, InsideInclusion) {
  const auto c = coefficient_at(disk_scene(), {0.5, 0.55});
  EXPECT_EQ(c.q0, 0.0);
  EXPECT_EQ(c.qD_chi, 1.0);
}

TEST(CoefficientAt, BumpAtItsCenter) {
  const Scene s(kUnit, GaussianBump{{0.2, 0.2}, 0.05, 0.5}, {{Disk{{0.7, 0.7}, 0.1}, 1.0}}, 2, 1.0);
  const auto c = coefficient_at(s, {0.2, 0.2});
  EXPECT_DOUBLE_EQ(c.q0, 0.5);
  EXPECT_EQ(c.qD_chi, 0.0);
}

TEST(CoefficientAt, RejectsPointOutsideDomain) {
  EXPECT_THROW(coefficient_at(disk_scene(), {1.5, 0.5}), InvalidArgument);
}

TEST(Scene, ValidationCollectsEveryViolation) {
  const auto errs = Scene::validate(kUnit, ConstantCoefficient{0.0},
                                    {{Disk{{0.95, 0.5}, 0.2}, 1.0}, {Disk{{0.3, 0.3}, 0.1}, -1.0}}, 1, 1.0);
  EXPECT_GE(errs.size(), 3u);
  bool has_m = false;
  for (const auto& e : errs) has_m |= e.find("m must be >= 2") != std::string::npos;
  EXPECT_TRUE(has_m);
  EXPECT_THROW(Scene(kUnit, ConstantCoefficient{0.0}, {}, 1, 1.0), InvalidArgument);
}

TEST(Scene, RejectsJumpBelowMu) {
  EXPECT_THROW(Scene(kUnit, ConstantCoefficient{0.0}, {{Disk{{0.5, 0.5}, 0.2}, 0.5}}, 2, 1.0), InvalidArgument);
}

TEST(TrueSupportValue, DiskAxisDirections) {
  EXPECT_NEAR(*true_support_value(disk_scene(), {1, 0}), 0.3, 1e-15);
  EXPECT_NEAR(*true_support_value(disk_scene(), {0, 1}), 0.3, 1e-15);
}

TEST(TrueSupportValue, SquareInclusionDiagonal) {
  const Scene s(kUnit, ConstantCoefficient{0.0}, {{AxisRect{{0.4, 0.4}, {0.6, 0.6}}, 1.0}}, 2, 1.0);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(*true_support_value(s, {r, r}), 0.8 / std::sqrt(2.0), 1e-15);
}

TEST(TrueSupportValue, EmptySceneHasNoValue) {
  const Scene s(kUnit, ConstantCoefficient{0.0}, {}, 2, 1.0);
  EXPECT_FALSE(true_support_value(s, {1, 0}).has_value());
}

TEST(TrueSupportValue, MonotoneUnderAddingInclusions) {
  const Scene one = disk_scene();
  const Scene two = one.with_inclusion({ConvexPolygon{{{0.1, 0.1}, {0.25, 0.12}, {0.15, 0.3}}}, 1.0});
  for (int k = 0; k < 64; ++k) {
    const Vec2 w = direction_from_angle(2 * std::numbers::pi * k / 64);
    EXPECT_LE(*true_support_value(two, w), *true_support_value(one, w));
  }
}

TEST(HullFromHalfplanes, AxisBox) {
  const std::vector<HalfPlane> planes{{{1, 0}, 0.3}, {{0, 1}, 0.3}, {{-1, 0}, -0.7}, {{0, -1}, -0.7}};
  const HullPolygon h = hull_from_halfplanes(kUnit, planes);
  EXPECT_NEAR(h.area(), 0.16, 1e-14);
  EXPECT_NEAR(hausdorff_distance(h, square(0.3, 0.7)), 0.0, 1e-14);
}

TEST(HullFromHalfplanes, SixteenDirectionsAroundDisk) {
  const Scene s = disk_scene();
  std::vector<HalfPlane> planes;
  for (int k = 0; k < 16; ++k) {
    const Vec2 w = direction_from_angle(2 * std::numbers::pi * k / 16);
    planes.push_back({w, *true_support_value(s, w)});
  }
  const HullPolygon h = hull_from_halfplanes(kUnit, planes);
  EXPECT_LE(hausdorff_distance(h, true_convex_hull(s)), 0.01);
}

TEST(HullFromHalfplanes, ContradictoryPlanesGiveEmpty) {
  const std::vector<HalfPlane> planes{{{1, 0}, 1.2}, {{0, 1}, 0.3}, {{-1, 0}, -0.7}, {{0, -1}, -0.7}};
  EXPECT_TRUE(hull_from_halfplanes(kUnit, planes).empty());
}

TEST(HullFromHalfplanes, RejectsTooFewOrOneSided) {
  const std::vector<HalfPlane> two{{{1, 0}, 0.3}, {{0, 1}, 0.3}};
  EXPECT_THROW(hull_from_halfplanes(kUnit, two), InvalidArgument);
  const std::vector<HalfPlane> one_side{{{1, 0}, 0.3}, {{0, 1}, 0.3}, {direction_from_angle(0.5), 0.3}};
  EXPECT_THROW(hull_from_halfplanes(kUnit, one_side), InvalidArgument);
}

TEST(HullFromHalfplanes, TrueSupportPlanesContainInclusions) {
  const Scene s = disk_scene({0.35, 0.35}, 0.12).with_inclusion({Disk{{0.65, 0.62}, 0.10}, 1.0});
  std::vector<HalfPlane> planes;
  for (int k = 0; k < 12; ++k) {
    const Vec2 w = direction_from_angle(2 * std::numbers::pi * k / 12);
    planes.push_back({w, *true_support_value(s, w)});
  }
  const HullPolygon h = hull_from_halfplanes(kUnit, planes);
  for (int j = 0; j <= 200; ++j)
    for (int i = 0; i <= 200; ++i) {
      const Vec2 p{i / 200.0, j / 200.0};
      if (inclusion_coefficient(s, p) != 0.0) {
        EXPECT_TRUE(h.contains(p, 1e-12));
      }
    }
}

TEST(Hausdorff, IdenticalIsZero) { EXPECT_EQ(hausdorff_distance(square(0, 1), square(0, 1)), 0.0); }

TEST(Hausdorff, Translation) {
  const HullPolygon moved({{0.1, 0}, {1.1, 0}, {1.1, 1}, {0.1, 1}});
  EXPECT_NEAR(hausdorff_distance(square(0, 1), moved), 0.1, 1e-12);
}

TEST(Hausdorff, NestedSquaresCornerToCorner) {
  EXPECT_NEAR(hausdorff_distance(square(0, 1), square(0.1, 0.9)), 0.1 * std::sqrt(2.0), 1e-12);
}

TEST(Hausdorff, RejectsEmpty) { EXPECT_THROW(hausdorff_distance(HullPolygon(), square(0, 1)), InvalidArgument); }

TEST(Hausdorff, MetricOnRandomTriples) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  auto random_poly = [&] {
    std::vector<Vec2> pts;
    for (int k = 0; k < 7; ++k) pts.push_back({u(rng), u(rng)});
    return convex_hull(pts);
  };
  for (int trial = 0; trial < 40; ++trial) {
    const HullPolygon a = random_poly(), b = random_poly(), c = random_poly();
    const double ab = hausdorff_distance(a, b), ba = hausdorff_distance(b, a);
    const double bc = hausdorff_distance(b, c), ac = hausdorff_distance(a, c);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_LE(ac, ab + bc + 1e-12);
    EXPECT_GE(ab, 0.0);
  }
}

TEST(ConvexHull, DropsInteriorAndCollinearPoints) {
  const HullPolygon h = convex_hull({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
  EXPECT_EQ(h.vertices().size(), 4u);
  EXPECT_NEAR(h.area(), 1.0, 1e-15);
}
