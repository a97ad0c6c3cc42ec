#include "islandlab/operators.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "islandlab/errors.hpp"

namespace islandlab {

namespace {

using Triplet = Eigen::Triplet<double>;

struct Assembly {
  std::vector<Triplet> main;
  std::vector<Triplet> coupling;
  int ns;

  void add(int row, int i, int j, double w, int nx) {
    const int col = ((i % nx) + nx) % nx * ns + j;
    if (j == 0 || j == ns - 1) {
      coupling.emplace_back(row, col, w);
    } else {
      main.emplace_back(row, col, w);
    }
  }
};

struct AssembledParts {
  LinearOperator::Matrix main, coupling;
  bool symmetric = false;
};

AssembledParts assemble(const std::shared_ptr<const MappedGrid>& grid,
                        const ScalarField* potential) {
  const MappedGrid& g = *grid;
  const int nx = g.nx(), ns = g.ns();
  const int n = nx * ns;
  const double dx = g.dx(), ds = g.ds();

  Assembly asmb;
  asmb.ns = ns;
  asmb.main.reserve(static_cast<std::size_t>(n) * 9);

  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) {
      const int row = i * ns + j;
      if (j == 0 || j == ns - 1) {
        asmb.main.emplace_back(row, row, 1.0);
        continue;
      }
      const auto c = g.laplacian_coefs(i, g.s(j));
      const double wxx = c.cxx / (dx * dx);
      const double wss = c.css / (ds * ds);
      const double wxs = c.cxs / (4.0 * dx * ds);
      const double ws = c.cs / (2.0 * ds);

      double diag = -2.0 * wxx - 2.0 * wss;
      if (potential) diag -= (*potential)(i, j);
      asmb.add(row, i, j, diag, nx);
      asmb.add(row, i - 1, j, wxx, nx);
      asmb.add(row, i + 1, j, wxx, nx);
      asmb.add(row, i, j - 1, wss - ws, nx);
      asmb.add(row, i, j + 1, wss + ws, nx);
      asmb.add(row, i + 1, j + 1, wxs, nx);
      asmb.add(row, i + 1, j - 1, -wxs, nx);
      asmb.add(row, i - 1, j + 1, -wxs, nx);
      asmb.add(row, i - 1, j - 1, wxs, nx);
    }
  }

  AssembledParts parts;
  parts.main.resize(n, n);
  parts.main.setFromTriplets(asmb.main.begin(), asmb.main.end());
  parts.main.makeCompressed();
  parts.coupling.resize(n, n);
  parts.coupling.setFromTriplets(asmb.coupling.begin(), asmb.coupling.end());
  parts.coupling.makeCompressed();

  bool x_independent_potential = true;
  if (potential) {
    for (int j = 0; j < ns && x_independent_potential; ++j) {
      for (int i = 1; i < nx; ++i) {
        if ((*potential)(i, j) != (*potential)(0, j)) {
          x_independent_potential = false;
          break;
        }
      }
    }
  }
  parts.symmetric = g.is_flat() && x_independent_potential;
  return parts;
}

}  // namespace

ScalarField LinearOperator::apply(const ScalarField& u) const {
  const Eigen::Map<const Eigen::VectorXd> v(u.data().data(),
                                            static_cast<Eigen::Index>(u.data().size()));
  Eigen::VectorXd w = main_ * v + coupling_ * v;
  ScalarField out(grid_);
  std::copy(w.data(), w.data() + w.size(), out.data().begin());
  return out;
}

LinearOperator assemble_laplacian(std::shared_ptr<const MappedGrid> grid) {
  AssembledParts parts = assemble(grid, nullptr);
  LinearOperator op;
  op.grid_ = std::move(grid);
  op.main_ = std::move(parts.main);
  op.coupling_ = std::move(parts.coupling);
  op.symmetric_ = parts.symmetric;
  return op;
}

LinearOperator assemble_helmholtz(std::shared_ptr<const MappedGrid> grid, const ScalarField& c) {
  if (c.nx() != grid->nx() || c.ns() != grid->ns()) {
    throw GridMismatch("assemble_helmholtz: potential sampled on a different grid");
  }
  AssembledParts parts = assemble(grid, &c);
  LinearOperator op;
  op.grid_ = std::move(grid);
  op.main_ = std::move(parts.main);
  op.coupling_ = std::move(parts.coupling);
  op.symmetric_ = parts.symmetric;
  return op;
}

DirichletSolver::DirichletSolver(const LinearOperator& op) : op_(&op) {
  lu_.compute(op.matrix());
  if (lu_.info() != Eigen::Success) {
    throw SingularSystem("Dirichlet factorization failed");
  }
}

ScalarField DirichletSolver::solve(const ScalarField& rhs, std::span<const double> bottom_values,
                                   std::span<const double> top_values) const {
  const MappedGrid& g = op_->grid();
  const int nx = g.nx(), ns = g.ns();
  if (rhs.nx() != nx || rhs.ns() != ns) throw GridMismatch("solve_dirichlet: rhs grid mismatch");
  if (static_cast<int>(bottom_values.size()) != nx || static_cast<int>(top_values.size()) != nx) {
    throw GridMismatch("solve_dirichlet: boundary sample count must equal nx");
  }
  for (int i = 0; i < nx; ++i) {
    if (!std::isfinite(bottom_values[i]) || !std::isfinite(top_values[i])) {
      throw Error("solve_dirichlet: non-finite boundary sample");
    }
  }

  const int n = nx * ns;
  Eigen::VectorXd bc = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < nx; ++i) {
    bc[i * ns] = bottom_values[i];
    bc[i * ns + ns - 1] = top_values[i];
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) {
      b[i * ns + j] = (j == 0) ? bottom_values[i] : (j == ns - 1) ? top_values[i] : rhs(i, j);
    }
  }
  Eigen::VectorXd b_mod = b - op_->boundary_coupling() * bc;
  // boundary rows of the coupling are empty, so b_mod keeps the wall samples

  Eigen::VectorXd u = lu_.solve(b_mod);
  if (lu_.info() != Eigen::Success) throw SingularSystem("Dirichlet solve failed");

  const double scale = std::max(b_mod.norm(), 1e-300);
  const double res = (op_->matrix() * u - b_mod).norm();
  if (!(res <= 1e-10 * scale) || !u.allFinite()) {
    std::ostringstream msg;
    msg << "Dirichlet solve residual " << res / scale << " exceeds contract 1e-10";
    throw SingularSystem(msg.str());
  }

  ScalarField out(op_->grid_ptr());
  std::copy(u.data(), u.data() + n, out.data().begin());
  return out;
}

ScalarField DirichletSolver::solve_zero_bc(const ScalarField& rhs) const {
  const std::vector<double> zeros(op_->grid().nx(), 0.0);
  return solve(rhs, zeros, zeros);
}

ScalarField solve_dirichlet(const LinearOperator& op, const ScalarField& rhs,
                            std::span<const double> bottom_values,
                            std::span<const double> top_values) {
  return DirichletSolver(op).solve(rhs, bottom_values, top_values);
}

double smallest_eigenvalue(const MappedGrid& grid, double tol, int max_iter) {
  const int nx = grid.nx(), ns = grid.ns();
  const int nint = nx * (ns - 2);
  auto grid_copy = std::make_shared<const MappedGrid>(grid);
  LinearOperator lap = assemble_laplacian(grid_copy);

  // interior block of -Laplacian
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nint) * 9);
  auto interior_index = [ns](int node) {
    const int i = node / ns, j = node % ns;
    if (j == 0 || j == ns - 1) return -1;
    return i * (ns - 2) + (j - 1);
  };
  const auto& A = lap.matrix();
  for (int col = 0; col < A.outerSize(); ++col) {
    const int jc = interior_index(col);
    if (jc < 0) continue;
    for (LinearOperator::Matrix::InnerIterator it(A, col); it; ++it) {
      const int jr = interior_index(static_cast<int>(it.row()));
      if (jr < 0) continue;
      trips.emplace_back(jr, jc, -it.value());
    }
  }
  Eigen::SparseMatrix<double> neg(nint, nint);
  neg.setFromTriplets(trips.begin(), trips.end());
  neg.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(neg);
  if (lu.info() != Eigen::Success) {
    throw SingularSystem("smallest_eigenvalue: factorization failed");
  }

  Eigen::VectorXd v = Eigen::VectorXd::Ones(nint);
  v.normalize();
  double lambda = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    Eigen::VectorXd w = lu.solve(v);
    const double lambda_new = v.dot(w) > 0 ? v.squaredNorm() / v.dot(w) : 0.0;
    const double wn = w.norm();
    if (wn == 0.0) throw NoConvergence("smallest_eigenvalue: zero iterate");
    w /= wn;
    if (k > 0 && std::abs(lambda_new - lambda) <= tol * std::abs(lambda_new)) {
      return lambda_new;
    }
    lambda = lambda_new;
    v = w;
  }
  throw NoConvergence("smallest_eigenvalue: no convergence within max_iter");
}

}  // namespace islandlab
