#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "islandlab/operators.hpp"
#include "islandlab/rng.hpp"
#include "test_helpers.hpp"

using namespace islandlab;
using test::couette_shape;
using test::kPi;

namespace {

// max interior residual of (Lap u) against a reference field
double interior_residual(const LinearOperator& op, const ScalarField& u,
                         const ScalarField& target) {
  const ScalarField lap = op.apply(u);
  double err = 0.0;
  for (int i = 0; i < u.nx(); ++i) {
    for (int j = 1; j < u.ns() - 1; ++j) {
      err = std::max(err, std::abs(lap(i, j) - target(i, j)));
    }
  }
  return err;
}

double manufactured_error(const BoundaryShape& shape, int nx, int ns,
                          double (*f)(double, double), double (*lap_f)(double, double)) {
  auto grid = build_grid(shape, nx, ns);
  ScalarField u(grid), target(grid);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) {
      u(i, j) = f(grid->x(i), grid->y(i, j));
      target(i, j) = lap_f(grid->x(i), grid->y(i, j));
    }
  }
  return interior_residual(assemble_laplacian(grid), u, target);
}

}  // namespace

TEST_CASE("flat-channel laplacian converges at second order on sin y") {
  auto f = [](double, double y) { return std::sin(y); };
  auto lap = [](double, double y) { return -std::sin(y); };
  const double e1 = manufactured_error(BoundaryShape::flat_channel(), 16, 17, f, lap);
  const double e2 = manufactured_error(BoundaryShape::flat_channel(), 32, 33, f, lap);
  CHECK(e1 / e2 > 3.6);
  CHECK(e1 / e2 < 4.4);
}

TEST_CASE("affine functions of y are annihilated exactly") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 17);
  ScalarField u(grid), zero(grid);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 17; ++j) u(i, j) = 0.3 - 1.7 * grid->y(i, j);
  }
  CHECK(interior_residual(assemble_laplacian(grid), u, zero) <= 1e-12);
}

TEST_CASE("perturbed-channel laplacian recovers Lap y^2 = 2 at second order") {
  const BoundaryShape shape = couette_shape(0.1);
  auto f = [](double, double y) { return y * y; };
  auto lap = [](double, double) { return 2.0; };
  const double e1 = manufactured_error(shape, 32, 33, f, lap);
  const double e2 = manufactured_error(shape, 64, 65, f, lap);
  CHECK(e1 / e2 > 3.6);
  CHECK(e1 / e2 < 4.4);
  CHECK(e2 < 1e-2);
}

TEST_CASE("helmholtz with zero potential equals the laplacian") {
  auto grid = build_grid(couette_shape(0.05), 16, 9);
  const ScalarField zero(grid);
  const LinearOperator lap = assemble_laplacian(grid);
  const LinearOperator helm = assemble_helmholtz(grid, zero);
  CHECK((lap.matrix() - helm.matrix()).norm() == 0.0);
  CHECK((lap.boundary_coupling() - helm.boundary_coupling()).norm() == 0.0);
}

TEST_CASE("constant potential shifts only the interior diagonal") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 9);
  ScalarField c(grid, 0.5);  // F(t) = -t/2 has F' = -1/2, and Lap - (-1/2) = Lap + 1/2
  const LinearOperator lap = assemble_laplacian(grid);
  const LinearOperator helm = assemble_helmholtz(grid, c);
  LinearOperator::Matrix diff = lap.matrix() - helm.matrix();
  diff.prune(0.0);
  int nonzeros = 0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (LinearOperator::Matrix::InnerIterator it(diff, k); it; ++it) {
      CHECK(it.row() == it.col());
      CHECK(it.value() == doctest::Approx(0.5).epsilon(1e-15));
      ++nonzeros;
    }
  }
  CHECK(nonzeros == 16 * 7);  // interior rows only
}

TEST_CASE("flat-channel helmholtz solve matches the 1d cosh profile") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 129);
  ScalarField c(grid, 1.0), rhs(grid, 1.0);
  const std::vector<double> zeros(16, 0.0);
  const ScalarField u = solve_dirichlet(assemble_helmholtz(grid, c), rhs, zeros, zeros);
  double err = 0.0;
  for (int j = 0; j < 129; ++j) {
    const double y = grid->y(0, j);
    const double exact = std::cosh(y) / std::cosh(1.0) - 1.0;
    err = std::max(err, std::abs(u(3, j) - exact));
  }
  CHECK(err < 5e-5);
}

TEST_CASE("zero data gives the zero solution") {
  auto grid = build_grid(couette_shape(0.1), 16, 17);
  const ScalarField rhs(grid);
  const std::vector<double> zeros(16, 0.0);
  const ScalarField u = solve_dirichlet(assemble_laplacian(grid), rhs, zeros, zeros);
  CHECK(u.max_abs() <= 1e-14);
}

TEST_CASE("poisson solve reproduces the couette parabola exactly") {
  // F = -1 constant: second differences are exact on quadratics
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 33);
  ScalarField rhs(grid, -1.0);
  const std::vector<double> zeros(16, 0.0);
  const ScalarField u = solve_dirichlet(assemble_laplacian(grid), rhs, zeros, zeros);
  double err = 0.0;
  for (int j = 0; j < 33; ++j) {
    const double y = grid->y(0, j);
    err = std::max(err, std::abs(u(5, j) - 0.5 * (1.0 - y * y)));
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("resonant potential is reported as singular") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 65);
  const double lambda1 = smallest_eigenvalue(*grid);
  ScalarField c(grid, -lambda1);  // Lap + lambda1^h: singular to iteration tolerance
  ScalarField rhs(grid, 1.0);
  const std::vector<double> zeros(16, 0.0);
  CHECK_THROWS_AS(solve_dirichlet(assemble_helmholtz(grid, c), rhs, zeros, zeros),
                  SingularSystem);
}

TEST_CASE("smallest eigenvalue approaches pi^2/4 on the flat channel") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 65);
  const double lambda1 = smallest_eigenvalue(*grid);
  CHECK(lambda1 == doctest::Approx(kPi * kPi / 4.0).epsilon(0.01));
}

TEST_CASE("smallest eigenvalue scales on the widened channel") {
  BoundaryShape wide = BoundaryShape::flat_channel();
  wide.base_bottom = FourierSeries::constant(-2.0);
  wide.base_top = FourierSeries::constant(2.0);
  auto grid = build_grid(wide, 16, 65);
  CHECK(smallest_eigenvalue(*grid) == doctest::Approx(kPi * kPi / 16.0).epsilon(0.01));
}

TEST_CASE("eigenvalue drift in epsilon is first order") {
  const double flat = smallest_eigenvalue(*build_grid(BoundaryShape::flat_channel(), 32, 65));
  double prev_ratio = 0.0;
  for (double eps : {0.04, 0.02, 0.01}) {
    const double lam = smallest_eigenvalue(*build_grid(couette_shape(eps), 32, 65));
    const double ratio = std::abs(lam - flat) / eps;
    if (prev_ratio > 0.0) CHECK(ratio < 2.0 * prev_ratio + 1e-6);
    prev_ratio = ratio;
  }
  CHECK(prev_ratio < 2.0);  // drift bounded by O(eps) with a modest constant
}

TEST_CASE("discrete maximum principle") {
  Rng rng(11);
  auto grid = build_grid(couette_shape(0.08), 24, 17);
  for (int trial = 0; trial < 5; ++trial) {
    ScalarField c(grid), rhs(grid);
    for (auto& v : c.data()) v = rng.uniform(0.0, 2.0);
    for (auto& v : rhs.data()) v = -rng.uniform(0.0, 1.0);
    std::vector<double> bot(24), top(24);
    for (int i = 0; i < 24; ++i) {
      bot[i] = rng.uniform(0.0, 1.0);
      top[i] = rng.uniform(0.0, 1.0);
    }
    const ScalarField u = solve_dirichlet(assemble_helmholtz(grid, c), rhs, bot, top);
    CHECK(u.min() >= -1e-9);
  }
}

TEST_CASE("flat x-independent operators are exactly symmetric") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 17);
  ScalarField c(grid);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 17; ++j) c(i, j) = std::sin(grid->y(i, j));  // x-independent
  }
  const LinearOperator helm = assemble_helmholtz(grid, c);
  CHECK(helm.symmetric());
  LinearOperator::Matrix diff = helm.matrix() - LinearOperator::Matrix(helm.matrix().transpose());
  diff.prune(0.0);
  CHECK(diff.nonZeros() == 0);

  // a genuinely mapped grid is not symmetric
  auto wavy = build_grid(couette_shape(0.1), 16, 17);
  CHECK_FALSE(assemble_laplacian(wavy).symmetric());
}

TEST_CASE("stencil stays within nine points and boundary rows are unit") {
  auto grid = build_grid(couette_shape(0.1), 16, 17);
  const LinearOperator op = assemble_laplacian(grid);
  using Mat = LinearOperator::Matrix;
  const Mat full = Mat(op.matrix()) + op.boundary_coupling();
  std::vector<int> per_row(full.rows(), 0);
  for (int k = 0; k < full.outerSize(); ++k) {
    for (Mat::InnerIterator it(full, k); it; ++it) ++per_row[it.row()];
  }
  const int ns = 17;
  for (int row = 0; row < full.rows(); ++row) {
    const int j = row % ns;
    if (j == 0 || j == ns - 1) {
      CHECK(per_row[row] == 1);
      CHECK(op.matrix().coeff(row, row) == 1.0);
    } else {
      CHECK(per_row[row] <= 9);
    }
  }
}

TEST_CASE("binary round trip is exact and csv carries full precision") {
  Rng rng(5);
  auto grid = build_grid(couette_shape(0.03), 16, 9);
  ScalarField f(grid);
  for (auto& v : f.data()) v = rng.uniform(-1.0, 1.0);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_binary(f, buf);
  const ScalarField g = read_binary(buf, grid);
  CHECK(g.max_abs_diff(f) == 0.0);

  std::stringstream csv;
  write_csv(f, csv);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "i,j,x,y,value");
  double sum = 0.0;
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto last = line.rfind(',');
    sum += std::stod(line.substr(last + 1));
    ++rows;
  }
  CHECK(rows == 16 * 9);
  double expect = 0.0;
  for (double v : f.data()) expect += v;
  CHECK(sum == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("binary header mismatch is rejected") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 9);
  auto other = build_grid(BoundaryShape::flat_channel(), 32, 9);
  ScalarField f(grid);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  write_binary(f, buf);
  CHECK_THROWS_AS(read_binary(buf, other), GridMismatch);
}
