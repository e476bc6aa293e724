#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "enclosure/geometry.hpp"

namespace enclosure {

using Complex = std::complex<double>;

/// Uniform N x N node grid over a rectangle with square cells. Node (i, j) sits at
/// (x0 + i*spacing, y0 + j*spacing); storage is row-major with index j*N + i.
class Grid {
 public:
  /// Requires odd N >= 5 and a rectangle whose sides give equal spacing in x and y.
  static Grid build(const Rect& rect, int n_nodes);

  const Rect& rect() const { return rect_; }
  int n() const { return n_; }
  double spacing() const { return spacing_; }
  std::size_t node_count() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t boundary_count() const { return 4 * static_cast<std::size_t>(n_ - 1); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
  Vec2 node(int i, int j) const { return {rect_.x0 + i * spacing_, rect_.y0 + j * spacing_}; }
  bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == n_ - 1 || j == n_ - 1; }

  /// Grid indices of boundary node k, counterclockwise from (x0, y0).
  std::pair<int, int> boundary_node(std::size_t k) const;

  bool operator==(const Grid&) const = default;

 private:
  Grid(Rect rect, int n, double spacing) : rect_(rect), n_(n), spacing_(spacing) {}

  Rect rect_;
  int n_ = 0;
  double spacing_ = 0.0;
};

/// Complex nodal samples on a grid. All values are finite.
class ComplexField {
 public:
  explicit ComplexField(const Grid& grid);
  ComplexField(const Grid& grid, std::vector<Complex> values);

  const Grid& grid() const { return grid_; }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  Complex operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  Complex& operator()(int i, int j) { return values_[grid_.index(i, j)]; }

  double sup_norm() const;
  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(Complex s);

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);

/// Values at the 4(N-1) boundary nodes, counterclockwise from corner (x0, y0).
class BoundaryData {
 public:
  explicit BoundaryData(const Grid& grid);
  BoundaryData(const Grid& grid, std::vector<Complex> values);

  const Grid& grid() const { return grid_; }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  std::size_t size() const { return values_.size(); }
  Complex operator[](std::size_t k) const { return values_[k]; }

  BoundaryData& operator-=(const BoundaryData& other);

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

using PointFunction = std::function<Complex(Vec2)>;

/// Samples `evaluator` at every node. Throws NumericFailure naming the node on NaN/Inf.
ComplexField sample_field(const PointFunction& evaluator, const Grid& grid);

/// Samples `evaluator` at the boundary nodes only.
BoundaryData sample_boundary(const PointFunction& evaluator, const Grid& grid);

BoundaryData boundary_trace(const ComplexField& field);

/// Outward normal derivative from the one-sided second-order difference
/// (3 u_b - 4 u_{b-h} + u_{b-2h}) / (2h) along the inward normal. Corner values are the average
/// of the two incident edges. Requires N >= 9.
BoundaryData normal_derivative(const ComplexField& field);

/// Outward flux (u_b - u_in) / h matched to the 5-point Laplacian, u_in being the interior
/// neighbour; zero at corners. For u vanishing on the boundary, boundary_integral(flux(u), w)
/// equals the interior sum of (L u) conj(w) h^2 exactly whenever w is discrete-harmonic.
BoundaryData summation_by_parts_flux(const ComplexField& field);

/// Trapezoid rule for sum_k w_k a_k conj(b_k) over the boundary; each node carries weight
/// `spacing` (corners collect spacing/2 from both incident edges).
Complex boundary_integral(const BoundaryData& a, const BoundaryData& b);

/// Two-dimensional trapezoid rule of field(x) * weight(x).
Complex interior_integral(const ComplexField& field, const std::function<double(Vec2)>& weight);

/// Writes one "i j re im" line per node.
void write_field_dump(std::ostream& out, const ComplexField& field);

}  // namespace enclosure
