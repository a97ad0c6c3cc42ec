#include "islandlab/steady.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "islandlab/errors.hpp"

namespace islandlab {

bool check_stability(const Nonlinearity& F, double lo, double hi, double lambda1, int samples,
                     double margin) {
  return F.min_df(lo, hi, samples) > -lambda1 + margin;
}

ScalarField shear_initial_guess(std::shared_ptr<const MappedGrid> grid,
                                const ShearExtension& extension) {
  ScalarField u(grid);
  const MappedGrid& g = *grid;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ns(); ++j) {
      u(i, j) = extension.value(g.y(i, j));
    }
  }
  return u;
}

namespace {

double nonlinear_residual(const LinearOperator& lap, const Nonlinearity& F, const ScalarField& u,
                          ScalarField& res) {
  res = lap.apply(u);
  const int nx = u.nx(), ns = u.ns();
  double rmax = 0.0;
  for (int i = 0; i < nx; ++i) {
    res(i, 0) = 0.0;
    res(i, ns - 1) = 0.0;
    for (int j = 1; j < ns - 1; ++j) {
      res(i, j) -= F.f(u(i, j));
      rmax = std::max(rmax, std::abs(res(i, j)));
    }
  }
  return rmax;
}

}  // namespace

SteadyResult solve_steady(std::shared_ptr<const MappedGrid> grid, const Nonlinearity& F,
                          const ScalarField& init, double lambda1, const SteadyOptions& opts) {
  const MappedGrid& g = *grid;
  const int nx = g.nx(), ns = g.ns();
  if (init.nx() != nx || init.ns() != ns) throw GridMismatch("solve_steady: init grid mismatch");

  ScalarField u = init;
  for (int i = 0; i < nx; ++i) {
    u(i, 0) = g.shape().c_bottom;
    u(i, ns - 1) = g.shape().c_top;
  }

  const LinearOperator lap = assemble_laplacian(grid);
  ScalarField res(grid), fprime(grid);
  NewtonTrace trace;

  double rmax = nonlinear_residual(lap, F, u, res);
  for (int iter = 0; iter < opts.max_iter && rmax > opts.tol; ++iter) {
    const double lo = u.min(), hi = u.max();
    const double pad = 0.1 * std::max(hi - lo, 1e-12);
    if (!check_stability(F, lo - pad, hi + pad, lambda1)) {
      throw StabilityViolated("solve_steady: inf F' <= -lambda1 over the iterate range");
    }

    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ns; ++j) fprime(i, j) = F.df(u(i, j));
    }
    const LinearOperator jac = assemble_helmholtz(grid, fprime);
    ScalarField neg_res(grid);
    for (std::size_t k = 0; k < res.data().size(); ++k) neg_res.data()[k] = -res.data()[k];
    const ScalarField delta = DirichletSolver(jac).solve_zero_bc(neg_res);

    double alpha = 1.0;
    ScalarField trial(grid);
    double rtrial = rmax;
    while (true) {
      for (std::size_t k = 0; k < u.data().size(); ++k) {
        trial.data()[k] = u.data()[k] + alpha * delta.data()[k];
      }
      rtrial = nonlinear_residual(lap, F, trial, res);
      if (rtrial <= (1.0 - opts.armijo * alpha) * rmax) break;
      alpha *= 0.5;
      if (alpha < opts.min_step) {
        std::ostringstream msg;
        msg << "solve_steady: line search stalled at residual " << rmax << "; history:";
        for (const NewtonStep& s : trace.steps) msg << " " << s.residual;
        throw NewtonDiverged(msg.str());
      }
    }
    u = trial;
    rmax = rtrial;
    trace.steps.push_back({iter + 1, rmax, alpha});
  }

  trace.final_residual = rmax;
  trace.converged = rmax <= opts.tol;
  if (!trace.converged) {
    std::ostringstream msg;
    msg << "solve_steady: residual " << rmax << " after " << opts.max_iter
        << " iterations; history:";
    for (const NewtonStep& s : trace.steps) msg << " " << s.residual;
    throw NewtonDiverged(msg.str());
  }
  return {std::move(u), std::move(trace)};
}

SteadyResult solve_steady_on_shape(const BoundaryShape& shape, const Nonlinearity& F, int nx,
                                   int ns, double lambda1, const ShearExtension& extension,
                                   const SteadyOptions& opts) {
  auto solve_at = [&](double eps, const ScalarField* warm) {
    auto grid = build_grid(shape.with_epsilon(eps), nx, ns);
    ScalarField init(grid);
    if (warm) {
      // previous rung's values carry over node-by-node in reference coords
      init.data() = warm->data();
    } else {
      init = shear_initial_guess(grid, extension);
    }
    return solve_steady(grid, F, init, lambda1, opts);
  };

  if (shape.epsilon <= opts.ladder_threshold) {
    try {
      return solve_at(shape.epsilon, nullptr);
    } catch (const NewtonDiverged&) {
      // fall through to the ladder
    }
  }
  int rungs = 1;
  while (shape.epsilon / (1 << rungs) > opts.ladder_threshold && rungs < 30) ++rungs;
  SteadyResult result = solve_at(shape.epsilon / (1 << rungs), nullptr);
  for (int k = rungs - 1; k >= 0; --k) {
    result = solve_at(shape.epsilon / (1 << k), &result.field);
  }
  return result;
}

}  // namespace islandlab
