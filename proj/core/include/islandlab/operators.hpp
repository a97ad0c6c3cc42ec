#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <span>

#include "islandlab/field.hpp"

namespace islandlab {

/// Compact 9-point discretization of a mapped-domain elliptic operator over
/// all grid DOFs. Dirichlet rows (s = 0, 1) are pinned to identity and their
/// couplings from interior rows live in a separate matrix, so matrix() is
/// exactly symmetric whenever the analytic operator is.
class LinearOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double>;

  /// Interior stencil with boundary columns removed, identity boundary rows.
  const Matrix& matrix() const { return main_; }
  /// Couplings of interior rows onto boundary nodes.
  const Matrix& boundary_coupling() const { return coupling_; }
  const std::shared_ptr<const MappedGrid>& grid_ptr() const { return grid_; }
  const MappedGrid& grid() const { return *grid_; }
  /// True when the assembled matrix is symmetric by construction
  /// (flat grid, x-independent potential).
  bool symmetric() const { return symmetric_; }
  int size() const { return static_cast<int>(main_.rows()); }

  /// Full operator application (stencil + boundary couplings).
  ScalarField apply(const ScalarField& u) const;

 private:
  friend LinearOperator assemble_laplacian(std::shared_ptr<const MappedGrid> grid);
  friend LinearOperator assemble_helmholtz(std::shared_ptr<const MappedGrid> grid,
                                           const ScalarField& c);
  std::shared_ptr<const MappedGrid> grid_;
  Matrix main_, coupling_;
  bool symmetric_ = false;
};

/// Second-order mapped-domain Laplacian with Dirichlet rows at s = 0, 1 and
/// periodic wrap in x.
LinearOperator assemble_laplacian(std::shared_ptr<const MappedGrid> grid);

/// Laplacian minus diag(c) on interior rows.
LinearOperator assemble_helmholtz(std::shared_ptr<const MappedGrid> grid, const ScalarField& c);

/// Factorized Dirichlet solver for repeated right-hand sides.
class DirichletSolver {
 public:
  explicit DirichletSolver(const LinearOperator& op);

  /// Solves op u = rhs at interior nodes with u = bottom/top samples at the
  /// walls; enforces the relative residual contract (throws SingularSystem).
  ScalarField solve(const ScalarField& rhs, std::span<const double> bottom_values,
                    std::span<const double> top_values) const;
  ScalarField solve_zero_bc(const ScalarField& rhs) const;

 private:
  const LinearOperator* op_;
  Eigen::SparseLU<LinearOperator::Matrix> lu_;
};

ScalarField solve_dirichlet(const LinearOperator& op, const ScalarField& rhs,
                            std::span<const double> bottom_values,
                            std::span<const double> top_values);

/// Principal eigenvalue of -Laplacian with Dirichlet walls and periodic x,
/// by inverse power iteration on the interior block.
double smallest_eigenvalue(const MappedGrid& grid, double tol = 1e-8, int max_iter = 500);

}  // namespace islandlab
