#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "enclosure/errors.hpp"
#include "enclosure/field.hpp"

using namespace enclosure;

namespace {
const Rect kUnit{0, 1, 0, 1};
}

TEST(Grid, FiveNodes) {
  const Grid g = Grid::build(kUnit, 5);
  EXPECT_EQ(g.spacing(), 0.25);
  EXPECT_EQ(g.node_count(), 25u);
  EXPECT_EQ(g.boundary_count(), 16u);
}

TEST(Grid, Spacing129) { EXPECT_EQ(Grid::build(kUnit, 129).spacing(), 1.0 / 128); }

TEST(Grid, RejectsEvenOrSmall) {
  EXPECT_THROW(Grid::build(kUnit, 4), InvalidArgument);
  EXPECT_THROW(Grid::build(kUnit, 10), InvalidArgument);
  EXPECT_THROW(Grid::build(Rect{0, 1, 0, 2}, 9), InvalidArgument);
}

TEST(Grid, BoundaryOrderIsCounterclockwise) {
  const Grid g = Grid::build(kUnit, 5);
  EXPECT_EQ(g.boundary_node(0), std::make_pair(0, 0));
  EXPECT_EQ(g.boundary_node(4), std::make_pair(4, 0));
  EXPECT_EQ(g.boundary_node(8), std::make_pair(4, 4));
  EXPECT_EQ(g.boundary_node(12), std::make_pair(0, 4));
  EXPECT_EQ(g.boundary_node(15), std::make_pair(0, 1));
}

TEST(SampleField, ConstantAndLinear) {
  const Grid g = Grid::build(kUnit, 5);
  const ComplexField one = sample_field([](Vec2) { return Complex(1.0); }, g);
  for (const auto& c : one.values()) EXPECT_EQ(c, Complex(1.0));
  const ComplexField x = sample_field([](Vec2 p) { return Complex(p.x); }, g);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) EXPECT_EQ(x(i, j), Complex(0.25 * i));
}

TEST(SampleField, OverflowNamesTheNode) {
  const Grid g = Grid::build(kUnit, 5);
  try {
    sample_field([](Vec2 p) { return Complex(std::exp(1000.0 * p.x)); }, g);
    FAIL() << "expected NumericFailure";
  } catch (const NumericFailure& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(BoundaryTrace, CountsAndOrder) {
  const Grid g = Grid::build(kUnit, 5);
  const BoundaryData ones = boundary_trace(sample_field([](Vec2) { return Complex(1.0); }, g));
  EXPECT_EQ(ones.size(), 16u);
  const BoundaryData x = boundary_trace(sample_field([](Vec2 p) { return Complex(p.x); }, g));
  for (int k = 0; k < 4; ++k) EXPECT_EQ(x[k], Complex(0.25 * k));
}

TEST(BoundaryTrace, MatchesBoundarySampling) {
  const Grid g = Grid::build(kUnit, 33);
  const PointFunction f = [](Vec2 p) { return Complex(std::sin(3 * p.x), p.y * p.y); };
  const BoundaryData a = boundary_trace(sample_field(f, g));
  const BoundaryData b = sample_boundary(f, g);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(NormalDerivative, LinearField) {
  const Grid g = Grid::build(kUnit, 9);
  const BoundaryData d = normal_derivative(sample_field([](Vec2 p) { return Complex(p.x); }, g));
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    const bool corner = (i == 0 || i == 8) && (j == 0 || j == 8);
    if (corner) continue;
    const double expect = i == 8 ? 1.0 : (i == 0 ? -1.0 : 0.0);
    EXPECT_NEAR(d[k].real(), expect, 1e-13) << "node " << i << "," << j;
  }
}

TEST(NormalDerivative, ConstantIsZero) {
  const Grid g = Grid::build(kUnit, 9);
  const BoundaryData d = normal_derivative(sample_field([](Vec2) { return Complex(3.0, -1.0); }, g));
  for (const auto& c : d.values()) EXPECT_NEAR(std::abs(c), 0.0, 1e-12);
}

TEST(NormalDerivative, QuadraticAtRightEdge) {
  const Grid g = Grid::build(kUnit, 17);
  const BoundaryData d = normal_derivative(sample_field([](Vec2 p) { return Complex(p.x * p.x); }, g));
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    if (i == 16 && j > 0 && j < 16) {
      EXPECT_NEAR(d[k].real(), 2.0, 1e-12);
    }
  }
}

TEST(NormalDerivative, RequiresNine) {
  const Grid g = Grid::build(kUnit, 7);
  EXPECT_THROW(normal_derivative(ComplexField(g)), InvalidArgument);
}

TEST(SummationByPartsFlux, LinearFieldAwayFromCorners) {
  const Grid g = Grid::build(kUnit, 9);
  const BoundaryData d = summation_by_parts_flux(sample_field([](Vec2 p) { return Complex(2 * p.x - p.y); }, g));
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    const bool corner = (i == 0 || i == 8) && (j == 0 || j == 8);
    double expect = 0.0;
    if (!corner) expect = j == 0 ? 1.0 : j == 8 ? -1.0 : i == 0 ? -2.0 : 2.0;
    EXPECT_NEAR(d[k].real(), expect, 1e-12) << i << "," << j;
  }
}

TEST(SummationByPartsFlux, GreenIdentityWithDiscreteHarmonicWeight) {
  const Grid g = Grid::build(kUnit, 17);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  ComplexField z(g);
  for (int j = 1; j < 16; ++j)
    for (int i = 1; i < 16; ++i) z(i, j) = Complex(nd(rng), nd(rng));
  // x^2 - y^2 and xy have zero 5-point Laplacian
  const auto w = [](Vec2 p) { return Complex(p.x * p.x - p.y * p.y, p.x * p.y); };
  const double dx = g.spacing();
  Complex volume = 0.0;
  for (int j = 1; j < 16; ++j)
    for (int i = 1; i < 16; ++i) {
      const Complex lz = (z(i + 1, j) + z(i - 1, j) + z(i, j + 1) + z(i, j - 1) - 4.0 * z(i, j)) / (dx * dx);
      volume += lz * std::conj(w(g.node(i, j))) * dx * dx;
    }
  const Complex surface = boundary_integral(summation_by_parts_flux(z), sample_boundary(w, g));
  EXPECT_NEAR(std::abs(surface - volume), 0.0, 1e-12 * std::abs(volume));
}

TEST(BoundaryIntegral, Perimeter) {
  const Grid g = Grid::build(kUnit, 9);
  const BoundaryData one(g, std::vector<Complex>(g.boundary_count(), 1.0));
  EXPECT_NEAR(boundary_integral(one, one).real(), 4.0, 1e-14);
}

TEST(BoundaryIntegral, LinearTrace) {
  const Grid g = Grid::build(kUnit, 9);
  const BoundaryData x = sample_boundary([](Vec2 p) { return Complex(p.x); }, g);
  const BoundaryData one(g, std::vector<Complex>(g.boundary_count(), 1.0));
  EXPECT_NEAR(boundary_integral(x, one).real(), 2.0, 1e-14);
}

TEST(BoundaryIntegral, ConjugatesSecondArgument) {
  const Grid g = Grid::build(kUnit, 9);
  const BoundaryData one(g, std::vector<Complex>(g.boundary_count(), 1.0));
  const BoundaryData i(g, std::vector<Complex>(g.boundary_count(), Complex(0, 1)));
  const Complex r = boundary_integral(one, i);
  EXPECT_NEAR(r.real(), 0.0, 1e-14);
  EXPECT_NEAR(r.imag(), -4.0, 1e-14);
}

TEST(BoundaryIntegral, HermitianSymmetry) {
  const Grid g = Grid::build(kUnit, 17);
  const BoundaryData a = sample_boundary([](Vec2 p) { return Complex(std::cos(p.x), p.y); }, g);
  const BoundaryData b = sample_boundary([](Vec2 p) { return Complex(p.x * p.y, -std::sin(p.y)); }, g);
  const Complex ab = boundary_integral(a, b), ba = boundary_integral(b, a);
  EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-15);
}

TEST(BoundaryIntegral, RejectsGridMismatch) {
  const BoundaryData a(Grid::build(kUnit, 9));
  const BoundaryData b(Grid::build(kUnit, 11));
  EXPECT_THROW(boundary_integral(a, b), InvalidArgument);
}

TEST(InteriorIntegral, Area) {
  const Grid g = Grid::build(kUnit, 9);
  const ComplexField one = sample_field([](Vec2) { return Complex(1.0); }, g);
  EXPECT_NEAR(interior_integral(one, [](Vec2) { return 1.0; }).real(), 1.0, 1e-14);
  EXPECT_EQ(interior_integral(ComplexField(g), [](Vec2) { return 1.0; }), Complex(0.0));
}

TEST(InteriorIntegral, DiskIndicatorConvergesToArea) {
  const Grid g = Grid::build(kUnit, 1025);
  const ComplexField one = sample_field([](Vec2) { return Complex(1.0); }, g);
  auto chi = [](Vec2 p) { return std::hypot(p.x - 0.5, p.y - 0.5) < 0.2 ? 1.0 : 0.0; };
  EXPECT_NEAR(interior_integral(one, chi).real(), std::numbers::pi * 0.04, 1e-3);
}

TEST(InteriorIntegral, SecondOrderOnSmoothField) {
  auto err = [](int n) {
    const Grid g = Grid::build(kUnit, n);
    const ComplexField f =
        sample_field([](Vec2 p) { return Complex(std::sin(std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y)); }, g);
    return std::abs(interior_integral(f, [](Vec2) { return 1.0; }).real() - 4 / (std::numbers::pi * std::numbers::pi));
  };
  const double order = std::log2(err(33) / err(65));
  EXPECT_NEAR(order, 2.0, 0.1);
}

TEST(FieldDump, OneLinePerNode) {
  const Grid g = Grid::build(kUnit, 5);
  std::ostringstream out;
  write_field_dump(out, sample_field([](Vec2 p) { return Complex(p.x, p.y); }, g));
  std::istringstream in(out.str());
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 25);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "0 0 0 0");
}
