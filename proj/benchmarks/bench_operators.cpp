#include <benchmark/benchmark.h>

#include "islandlab/pipeline.hpp"

using namespace islandlab;

namespace {

BoundaryShape wavy_shape(double eps) {
  BoundaryShape shape = BoundaryShape::flat_channel();
  shape.top_bump = FourierSeries::cosine(1, 1.0);
  shape.epsilon = eps;
  return shape;
}

void BM_AssembleLaplacian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto grid = build_grid(wavy_shape(0.05), n, n + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_laplacian(grid));
  }
  state.SetComplexityN(n * (n + 1));
}
BENCHMARK(BM_AssembleLaplacian)->Arg(64)->Arg(128)->Arg(192)->Complexity();

void BM_DirichletSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto grid = build_grid(wavy_shape(0.05), n, n + 1);
  const LinearOperator op = assemble_laplacian(grid);
  ScalarField rhs(grid, -1.0);
  const std::vector<double> zeros(n, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_dirichlet(op, rhs, zeros, zeros));
  }
  state.SetComplexityN(n * (n + 1));
}
BENCHMARK(BM_DirichletSolve)->Arg(64)->Arg(128)->Arg(192)->Complexity();

void BM_SmallestEigenvalue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto grid = build_grid(BoundaryShape::flat_channel(), n, n + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smallest_eigenvalue(*grid));
  }
}
BENCHMARK(BM_SmallestEigenvalue)->Arg(64)->Arg(128);

void BM_SteadyNewton(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Nonlinearity F = Nonlinearity::constant(-1.0);
  F.add_sin(0.3, 1.0, 0.0);
  const ShearProfile profile = solve_shear(F, 0.0, 0.0, n + 1);
  const ShearExtension ext(profile, F, 0.1);
  const BoundaryShape shape = wavy_shape(0.02);
  const double lambda1 = smallest_eigenvalue(*build_grid(shape.base(), n, n + 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_steady_on_shape(shape, F, n, n + 1, lambda1, ext));
  }
}
BENCHMARK(BM_SteadyNewton)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
