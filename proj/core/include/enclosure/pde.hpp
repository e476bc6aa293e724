#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "enclosure/field.hpp"
#include "enclosure/geometry.hpp"

namespace enclosure {

/// Five-point Laplacian on the interior nodes with the Dirichlet boundary eliminated.
///
/// The interior block is factored once (LDLT of the SPD matrix -L) at assembly; the factor is
/// immutable afterwards and may be shared by concurrent solves.
class DiscreteLaplacian {
 public:
  static std::shared_ptr<const DiscreteLaplacian> assemble(const Grid& grid);

  DiscreteLaplacian(const DiscreteLaplacian&) = delete;
  DiscreteLaplacian& operator=(const DiscreteLaplacian&) = delete;
  ~DiscreteLaplacian();

  const Grid& grid() const { return grid_; }
  /// Interior-to-interior block, weights (1, 1, -4, 1, 1) / spacing^2.
  const Eigen::SparseMatrix<double>& interior_matrix() const { return matrix_; }
  std::size_t interior_count() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t interior_index(int i, int j) const {
    return static_cast<std::size_t>(j - 1) * (grid_.n() - 2) + (i - 1);
  }

  /// Discrete Laplacian of u at the interior nodes, boundary values of u included. Boundary
  /// entries of the result are zero.
  ComplexField apply(const ComplexField& u) const;

  /// Interior values of u, row-major over the interior nodes.
  Eigen::VectorXcd gather_interior(const ComplexField& u) const;
  /// Field with the given interior values and zero boundary.
  ComplexField scatter_interior(const Eigen::VectorXcd& interior) const;

  /// Solves L x = rhs for x with zero boundary values; the real and imaginary parts go through
  /// the cached real factorization.
  Eigen::VectorXcd solve_interior(const Eigen::VectorXcd& rhs) const;

  /// Smallest eigenvalue of -L.
  double smallest_eigenvalue() const;

 private:
  explicit DiscreteLaplacian(const Grid& grid);

  Grid grid_;
  Eigen::SparseMatrix<double> matrix_;
  struct Factor;
  std::unique_ptr<Factor> factor_;
};

/// Solves L u = source at interior nodes with u = dirichlet on the boundary. The interior
/// residual is driven below 1e-12 relative; failing that throws InternalFault.
ComplexField solve_poisson(const DiscreteLaplacian& laplacian, const ComplexField& source,
                           const BoundaryData& dirichlet);
/// Zero Dirichlet data.
ComplexField solve_poisson(const DiscreteLaplacian& laplacian, const ComplexField& source);

/// Total coefficient q = q0 + chi_D q_D sampled at every node.
std::vector<double> sample_total_coefficient(const Scene& scene, const Grid& grid);
/// Background coefficient q0 sampled at every node.
std::vector<double> sample_background_coefficient(const Scene& scene, const Grid& grid);

struct NewtonOptions {
  double tol_rel = 1e-12;
  double floor = 1e-300;
  int max_iterations = 25;
  /// Below this ratio of sup|m q (v+z)^(m-1)| to the smallest Laplacian eigenvalue the cached
  /// Laplacian factor stands in for the Jacobian.
  double chord_threshold = 1e-6;
};

struct NewtonReport {
  int iterations = 0;
  double final_residual = 0.0;
  double tolerance = 0.0;
  bool converged = false;
  std::vector<double> history;
  int jacobian_factorizations = 0;
};

struct SemilinearSolution {
  ComplexField z;
  NewtonReport report;
};

/// Residual map L z + q (v + z)^m at the interior nodes (z vanishes on the boundary).
Eigen::VectorXcd semilinear_residual(const DiscreteLaplacian& laplacian, std::span<const double> q,
                                     int m, const ComplexField& v, const ComplexField& z);

/// Newton iteration from z = 0 for L z = -q (v + z)^m, z = 0 on the boundary, so that v + z
/// solves the semilinear problem when v is harmonic. Stops when the interior residual sup-norm
/// is at most tol_rel * max(sup|q v^m|, floor). A report with converged == false means the data
/// lies outside the small-data regime; no damping is applied.
SemilinearSolution solve_semilinear_residual(const DiscreteLaplacian& laplacian,
                                             std::span<const double> q, int m,
                                             const ComplexField& v,
                                             const NewtonOptions& options = {});
SemilinearSolution solve_semilinear_residual(const DiscreteLaplacian& laplacian,
                                             const Scene& scene, const ComplexField& v,
                                             const NewtonOptions& options = {});

struct JacobianCheck {
  double analytic = 0.0;           ///< sup-norm of J d
  double numeric = 0.0;            ///< sup-norm of the central difference quotient
  double relative_mismatch = 0.0;  ///< sup|J d - FD| / sup|J d|
  double step = 0.0;
};

/// Compares the Newton linearization L + m q (v+z)^(m-1) applied to `direction` against a
/// central finite difference of the residual map. A non-positive step selects
/// sqrt(eps) * max(1, sup|z|) / sup|direction|.
JacobianCheck jacobian_check(const DiscreteLaplacian& laplacian, std::span<const double> q, int m,
                             const ComplexField& v, const ComplexField& z,
                             const ComplexField& direction, double step = 0.0);

}  // namespace enclosure
