#include "enclosure/field.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "enclosure/errors.hpp"

namespace enclosure {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw InvalidArgument(std::string(what) + ": grid mismatch");
}

}  // namespace

Grid Grid::build(const Rect& rect, int n_nodes) {
  if (n_nodes < 5 || n_nodes % 2 == 0)
    throw InvalidArgument("Grid: node count per side must be odd and >= 5, got " +
                          std::to_string(n_nodes));
  if (!(rect.width() > 0.0 && rect.height() > 0.0))
    throw InvalidArgument("Grid: degenerate rectangle");
  const double dx = rect.width() / (n_nodes - 1);
  const double dy = rect.height() / (n_nodes - 1);
  if (std::abs(dx - dy) > 1e-12 * dx)
    throw InvalidArgument("Grid: cells must be square (domain width must equal height)");
  return Grid(rect, n_nodes, dx);
}

std::pair<int, int> Grid::boundary_node(std::size_t k) const {
  const int e = n_ - 1;
  const int s = static_cast<int>(k % static_cast<std::size_t>(e));
  switch (k / static_cast<std::size_t>(e)) {
    case 0: return {s, 0};
    case 1: return {e, s};
    case 2: return {e - s, e};
    case 3: return {0, e - s};
    default: throw InvalidArgument("Grid::boundary_node: index out of range");
  }
}

ComplexField::ComplexField(const Grid& grid) : grid_(grid), values_(grid.node_count()) {}

ComplexField::ComplexField(const Grid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count())
    throw InvalidArgument("ComplexField: value count does not match grid");
}

double ComplexField::sup_norm() const {
  double s = 0.0;
  for (const Complex& v : values_) s = std::max(s, std::abs(v));
  return s;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(grid_, other.grid_, "ComplexField +=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(grid_, other.grid_, "ComplexField -=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ComplexField& ComplexField::operator*=(Complex s) {
  for (Complex& v : values_) v *= s;
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }

BoundaryData::BoundaryData(const Grid& grid) : grid_(grid), values_(grid.boundary_count()) {}

BoundaryData::BoundaryData(const Grid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.boundary_count())
    throw InvalidArgument("BoundaryData: value count does not match grid");
}

BoundaryData& BoundaryData::operator-=(const BoundaryData& other) {
  require_same_grid(grid_, other.grid_, "BoundaryData -=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ComplexField sample_field(const PointFunction& evaluator, const Grid& grid) {
  ComplexField f(grid);
  for (int j = 0; j < grid.n(); ++j) {
    for (int i = 0; i < grid.n(); ++i) {
      const Complex v = evaluator(grid.node(i, j));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericFailure(fmt::format("sample_field: non-finite value at node ({}, {})", i, j));
      f(i, j) = v;
    }
  }
  return f;
}

BoundaryData sample_boundary(const PointFunction& evaluator, const Grid& grid) {
  BoundaryData b(grid);
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto [i, j] = grid.boundary_node(k);
    const Complex v = evaluator(grid.node(i, j));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericFailure(fmt::format("sample_boundary: non-finite value at node ({}, {})", i, j));
    b.values()[k] = v;
  }
  return b;
}

BoundaryData boundary_trace(const ComplexField& field) {
  const Grid& g = field.grid();
  BoundaryData b(g);
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    b.values()[k] = field(i, j);
  }
  return b;
}

BoundaryData normal_derivative(const ComplexField& field) {
  const Grid& g = field.grid();
  if (g.n() < 9) throw InvalidArgument("normal_derivative: needs N >= 9");
  const int e = g.n() - 1;
  const double inv = 1.0 / (2.0 * g.spacing());
  // one-sided difference stepping from (i, j) inward by (di, dj)
  auto one_sided = [&](int i, int j, int di, int dj) {
    return (3.0 * field(i, j) - 4.0 * field(i + di, j + dj) + field(i + 2 * di, j + 2 * dj)) * inv;
  };
  BoundaryData out(g);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    Complex sum = 0.0;
    int count = 0;
    if (j == 0) { sum += one_sided(i, j, 0, 1); ++count; }
    if (i == e) { sum += one_sided(i, j, -1, 0); ++count; }
    if (j == e) { sum += one_sided(i, j, 0, -1); ++count; }
    if (i == 0) { sum += one_sided(i, j, 1, 0); ++count; }
    out.values()[k] = sum / static_cast<double>(count);
  }
  return out;
}

BoundaryData summation_by_parts_flux(const ComplexField& field) {
  const Grid& g = field.grid();
  const int e = g.n() - 1;
  const double inv = 1.0 / g.spacing();
  BoundaryData out(g);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    const bool corner = (i == 0 || i == e) && (j == 0 || j == e);
    if (corner) continue;
    int di = 0, dj = 0;
    if (j == 0) dj = 1;
    else if (j == e) dj = -1;
    else if (i == 0) di = 1;
    else di = -1;
    out.values()[k] = (field(i, j) - field(i + di, j + dj)) * inv;
  }
  return out;
}

Complex boundary_integral(const BoundaryData& a, const BoundaryData& b) {
  require_same_grid(a.grid(), b.grid(), "boundary_integral");
  Complex sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * std::conj(b[k]);
  return sum * a.grid().spacing();
}

Complex interior_integral(const ComplexField& field, const std::function<double(Vec2)>& weight) {
  const Grid& g = field.grid();
  const int e = g.n() - 1;
  Complex sum = 0.0;
  for (int j = 0; j <= e; ++j) {
    const double wj = (j == 0 || j == e) ? 0.5 : 1.0;
    for (int i = 0; i <= e; ++i) {
      const double wi = (i == 0 || i == e) ? 0.5 : 1.0;
      sum += wi * wj * field(i, j) * weight(g.node(i, j));
    }
  }
  return sum * (g.spacing() * g.spacing());
}

void write_field_dump(std::ostream& out, const ComplexField& field) {
  const Grid& g = field.grid();
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i)
      out << fmt::format("{} {} {} {}\n", i, j, field(i, j).real(), field(i, j).imag());
}

}  // namespace enclosure
