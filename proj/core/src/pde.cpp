#include "enclosure/pde.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "enclosure/errors.hpp"

namespace enclosure {

namespace {

Complex ipow(Complex w, int m) {
  Complex r = w;
  for (int k = 1; k < m; ++k) r *= w;
  return r;
}

double sup_norm(const Eigen::VectorXcd& v) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) s = std::max(s, std::abs(v[k]));
  return s;
}

// Roundoff level of a residual evaluation, in units of machine epsilon.
constexpr double kRoundoffFactor = 32.0;

}  // namespace

struct DiscreteLaplacian::Factor {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

DiscreteLaplacian::~DiscreteLaplacian() = default;

DiscreteLaplacian::DiscreteLaplacian(const Grid& grid) : grid_(grid) {
  const int n = grid.n();
  const int ni = n - 2;
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(ni) * ni * 5);
  for (int j = 1; j <= ni; ++j) {
    for (int i = 1; i <= ni; ++i) {
      const auto row = static_cast<Eigen::Index>(interior_index(i, j));
      triplets.emplace_back(row, row, -4.0 * inv_h2);
      if (i > 1) triplets.emplace_back(row, static_cast<Eigen::Index>(interior_index(i - 1, j)), inv_h2);
      if (i < ni) triplets.emplace_back(row, static_cast<Eigen::Index>(interior_index(i + 1, j)), inv_h2);
      if (j > 1) triplets.emplace_back(row, static_cast<Eigen::Index>(interior_index(i, j - 1)), inv_h2);
      if (j < ni) triplets.emplace_back(row, static_cast<Eigen::Index>(interior_index(i, j + 1)), inv_h2);
    }
  }
  const auto count = static_cast<Eigen::Index>(ni) * ni;
  matrix_.resize(count, count);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();

  factor_ = std::make_unique<Factor>();
  Eigen::SparseMatrix<double> spd = -matrix_;
  factor_->ldlt.compute(spd);
  if (factor_->ldlt.info() != Eigen::Success)
    throw InternalFault("DiscreteLaplacian: factorization of the Dirichlet Laplacian failed");
}

std::shared_ptr<const DiscreteLaplacian> DiscreteLaplacian::assemble(const Grid& grid) {
  return std::shared_ptr<const DiscreteLaplacian>(new DiscreteLaplacian(grid));
}

ComplexField DiscreteLaplacian::apply(const ComplexField& u) const {
  if (!(u.grid() == grid_)) throw InvalidArgument("DiscreteLaplacian::apply: grid mismatch");
  const int n = grid_.n();
  const double inv_h2 = 1.0 / (grid_.spacing() * grid_.spacing());
  ComplexField out(grid_);
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i)
      out(i, j) = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) - 4.0 * u(i, j)) * inv_h2;
  return out;
}

Eigen::VectorXcd DiscreteLaplacian::gather_interior(const ComplexField& u) const {
  const int n = grid_.n();
  Eigen::VectorXcd x(static_cast<Eigen::Index>(interior_count()));
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i) x[static_cast<Eigen::Index>(interior_index(i, j))] = u(i, j);
  return x;
}

ComplexField DiscreteLaplacian::scatter_interior(const Eigen::VectorXcd& x) const {
  const int n = grid_.n();
  ComplexField u(grid_);
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i) u(i, j) = x[static_cast<Eigen::Index>(interior_index(i, j))];
  return u;
}

Eigen::VectorXcd DiscreteLaplacian::solve_interior(const Eigen::VectorXcd& rhs) const {
  // L = -(LDLT), so x = -(LDLT)^{-1} rhs
  const Eigen::VectorXd re = factor_->ldlt.solve(-rhs.real());
  const Eigen::VectorXd im = factor_->ldlt.solve(-rhs.imag());
  Eigen::VectorXcd x(rhs.size());
  x.real() = re;
  x.imag() = im;
  return x;
}

double DiscreteLaplacian::smallest_eigenvalue() const {
  const double s = std::sin(std::numbers::pi / (2.0 * (grid_.n() - 1)));
  return 8.0 * s * s / (grid_.spacing() * grid_.spacing());
}

ComplexField solve_poisson(const DiscreteLaplacian& lap, const ComplexField& source,
                           const BoundaryData& dirichlet) {
  const Grid& g = lap.grid();
  if (!(source.grid() == g) || !(dirichlet.grid() == g))
    throw InvalidArgument("solve_poisson: grid mismatch");
  for (const Complex& v : source.values())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument("solve_poisson: non-finite source");
  for (const Complex& v : dirichlet.values())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument("solve_poisson: non-finite boundary data");

  ComplexField boundary_only(g);
  for (std::size_t k = 0; k < dirichlet.size(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    boundary_only(i, j) = dirichlet[k];
  }
  // interior rows of L applied to the boundary-only field give the affine load
  const Eigen::VectorXcd coupling = lap.gather_interior(lap.apply(boundary_only));
  const Eigen::VectorXcd rhs = lap.gather_interior(source) - coupling;

  const double a_norm = 8.0 / (g.spacing() * g.spacing());
  Eigen::VectorXcd x = lap.solve_interior(rhs);
  double backward = 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXcd r = rhs - lap.interior_matrix() * x;
    const double scale = a_norm * sup_norm(x) + sup_norm(rhs);
    backward = scale > 0.0 ? sup_norm(r) / scale : 0.0;
    if (backward <= 1e-12) break;
    x += lap.solve_interior(r);
  }
  if (!(backward <= 1e-12))
    throw InternalFault("solve_poisson: linear solve did not reach 1e-12 relative residual");

  ComplexField u = lap.scatter_interior(x);
  for (std::size_t k = 0; k < dirichlet.size(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    u(i, j) = dirichlet[k];
  }
  return u;
}

ComplexField solve_poisson(const DiscreteLaplacian& lap, const ComplexField& source) {
  return solve_poisson(lap, source, BoundaryData(lap.grid()));
}

std::vector<double> sample_total_coefficient(const Scene& scene, const Grid& grid) {
  std::vector<double> q(grid.node_count());
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) q[grid.index(i, j)] = coefficient_at(scene, grid.node(i, j)).total();
  return q;
}

std::vector<double> sample_background_coefficient(const Scene& scene, const Grid& grid) {
  std::vector<double> q(grid.node_count());
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i)
      q[grid.index(i, j)] = evaluate_background(scene.background(), grid.node(i, j));
  return q;
}

Eigen::VectorXcd semilinear_residual(const DiscreteLaplacian& lap, std::span<const double> q, int m,
                                     const ComplexField& v, const ComplexField& z) {
  const Grid& g = lap.grid();
  Eigen::VectorXcd r = lap.gather_interior(lap.apply(z));
  for (int j = 1; j < g.n() - 1; ++j)
    for (int i = 1; i < g.n() - 1; ++i) {
      const std::size_t k = g.index(i, j);
      r[static_cast<Eigen::Index>(lap.interior_index(i, j))] += q[k] * ipow(v.values()[k] + z.values()[k], m);
    }
  return r;
}

SemilinearSolution solve_semilinear_residual(const DiscreteLaplacian& lap, std::span<const double> q,
                                             int m, const ComplexField& v,
                                             const NewtonOptions& options) {
  const Grid& g = lap.grid();
  if (!(v.grid() == g)) throw InvalidArgument("solve_semilinear_residual: grid mismatch");
  if (q.size() != g.node_count()) throw InvalidArgument("solve_semilinear_residual: coefficient size");
  if (m < 2) throw InvalidArgument("solve_semilinear_residual: m must be >= 2");

  double forcing = 0.0;
  for (int j = 1; j < g.n() - 1; ++j)
    for (int i = 1; i < g.n() - 1; ++i) {
      const std::size_t k = g.index(i, j);
      forcing = std::max(forcing, std::abs(q[k] * ipow(v.values()[k], m)));
    }
  if (!std::isfinite(forcing)) throw NumericFailure("solve_semilinear_residual: q v^m not finite");

  SemilinearSolution sol{ComplexField(g), {}};
  NewtonReport& rep = sol.report;
  rep.tolerance = options.tol_rel * std::max(forcing, options.floor);

  const double a_norm = 8.0 / (g.spacing() * g.spacing());
  const double lambda_min = lap.smallest_eigenvalue();
  const auto count = static_cast<Eigen::Index>(lap.interior_count());
  Eigen::VectorXcd r = semilinear_residual(lap, q, m, v, sol.z);

  for (int it = 1; it <= options.max_iterations; ++it) {
    // diagonal of the nonlinear part of the Jacobian
    Eigen::VectorXcd diag(count);
    double pert = 0.0;
    for (int j = 1; j < g.n() - 1; ++j)
      for (int i = 1; i < g.n() - 1; ++i) {
        const std::size_t k = g.index(i, j);
        const Complex d = static_cast<double>(m) * q[k] * ipow(v.values()[k] + sol.z.values()[k], m - 1);
        diag[static_cast<Eigen::Index>(lap.interior_index(i, j))] = d;
        pert = std::max(pert, std::abs(d));
      }

    Eigen::VectorXcd delta;
    if (pert / lambda_min < options.chord_threshold) {
      delta = lap.solve_interior(-r);
    } else {
      Eigen::SparseMatrix<Complex> jac = lap.interior_matrix().cast<Complex>();
      for (Eigen::Index k = 0; k < count; ++k) jac.coeffRef(k, k) += diag[k];
      jac.makeCompressed();
      Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
      lu.compute(jac);
      ++rep.jacobian_factorizations;
      if (lu.info() != Eigen::Success) {
        rep.iterations = it;
        rep.converged = false;
        return sol;
      }
      delta = lu.solve(-r);
    }

    sol.z = sol.z + lap.scatter_interior(delta);
    r = semilinear_residual(lap, q, m, v, sol.z);
    const double res = sup_norm(r);
    rep.history.push_back(res);
    rep.iterations = it;
    rep.final_residual = res;
    if (!std::isfinite(res)) break;
    const double roundoff = kRoundoffFactor * std::numeric_limits<double>::epsilon() *
                            (a_norm * sol.z.sup_norm() + forcing);
    if (res <= std::max(rep.tolerance, roundoff)) {
      rep.converged = true;
      break;
    }
  }
  for (const Complex& c : sol.z.values())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      rep.converged = false;
      break;
    }
  return sol;
}

SemilinearSolution solve_semilinear_residual(const DiscreteLaplacian& lap, const Scene& scene,
                                             const ComplexField& v, const NewtonOptions& options) {
  const auto q = sample_total_coefficient(scene, lap.grid());
  return solve_semilinear_residual(lap, q, scene.m(), v, options);
}

JacobianCheck jacobian_check(const DiscreteLaplacian& lap, std::span<const double> q, int m,
                             const ComplexField& v, const ComplexField& z,
                             const ComplexField& direction, double step) {
  const Grid& g = lap.grid();
  const double dnorm = direction.sup_norm();
  if (step <= 0.0) {
    step = dnorm > 0.0 ? std::sqrt(std::numeric_limits<double>::epsilon()) *
                             std::max(1.0, z.sup_norm()) / dnorm
                       : 1.0;
  }
  // the direction must vanish on the boundary like z does
  ComplexField d = direction;
  for (std::size_t k = 0; k < g.boundary_count(); ++k) {
    const auto [i, j] = g.boundary_node(k);
    d(i, j) = 0.0;
  }
  ComplexField zp = z;
  ComplexField zm = z;
  for (std::size_t k = 0; k < zp.values().size(); ++k) {
    zp.values()[k] += step * d.values()[k];
    zm.values()[k] -= step * d.values()[k];
  }
  const Eigen::VectorXcd fd =
      (semilinear_residual(lap, q, m, v, zp) - semilinear_residual(lap, q, m, v, zm)) / (2.0 * step);

  Eigen::VectorXcd jd = lap.gather_interior(lap.apply(d));
  for (int j = 1; j < g.n() - 1; ++j)
    for (int i = 1; i < g.n() - 1; ++i) {
      const std::size_t k = g.index(i, j);
      jd[static_cast<Eigen::Index>(lap.interior_index(i, j))] +=
          static_cast<double>(m) * q[k] * ipow(v.values()[k] + z.values()[k], m - 1) * d.values()[k];
    }

  JacobianCheck out;
  out.analytic = sup_norm(jd);
  out.numeric = sup_norm(fd);
  out.relative_mismatch = out.analytic > 0.0 ? sup_norm(jd - fd) / out.analytic : sup_norm(fd);
  out.step = step;
  return out;
}

}  // namespace enclosure
