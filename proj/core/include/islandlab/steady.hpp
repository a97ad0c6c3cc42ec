#pragma once

#include <memory>
#include <vector>

#include "islandlab/operators.hpp"
#include "islandlab/shear.hpp"

namespace islandlab {

struct NewtonStep {
  int iter;
  double residual;
  double step_length;
};

struct NewtonTrace {
  std::vector<NewtonStep> steps;
  double final_residual = 0.0;
  bool converged = false;
};

struct SteadyResult {
  ScalarField field;
  NewtonTrace trace;
};

struct SteadyOptions {
  double tol = 1e-10;     // nonlinear residual, max norm
  int max_iter = 50;
  double min_step = 1.0 / 1024.0;
  double armijo = 1e-4;
  double ladder_threshold = 0.15;  // epsilon above which continuation kicks in
};

/// True iff min F' over a sample of [lo, hi] exceeds -lambda1 + margin.
bool check_stability(const Nonlinearity& F, double lo, double hi, double lambda1,
                     int samples = 1000, double margin = 1e-6);

/// Initial Newton guess: the extended shear state evaluated at the physical
/// height of every node.
ScalarField shear_initial_guess(std::shared_ptr<const MappedGrid> grid,
                                const ShearExtension& extension);

/// Damped Newton for Lap psi = F(psi) with psi = c_top / c_bottom on the
/// walls. The iterate range is stability-checked each step.
SteadyResult solve_steady(std::shared_ptr<const MappedGrid> grid, const Nonlinearity& F,
                          const ScalarField& init, double lambda1,
                          const SteadyOptions& opts = {});

/// Solve on shape at its epsilon, with an epsilon-continuation ladder that
/// reuses each rung's solution as the next initial guess.
SteadyResult solve_steady_on_shape(const BoundaryShape& shape, const Nonlinearity& F, int nx,
                                   int ns, double lambda1, const ShearExtension& extension,
                                   const SteadyOptions& opts = {});

}  // namespace islandlab
