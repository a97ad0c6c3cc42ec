#include "islandlab/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "islandlab/errors.hpp"

namespace islandlab {

CaseContext prepare_case(const BoundaryShape& shape, const Nonlinearity& F, int nx, int ns) {
  if (shape.base_bottom.has_nonconstant_mode(1e-14) ||
      shape.base_top.has_nonconstant_mode(1e-14) ||
      std::abs(shape.base_bottom.value(0.0) + 1.0) > 1e-12 ||
      std::abs(shape.base_top.value(0.0) - 1.0) > 1e-12) {
    throw Error("prepare_case: perturbative pipeline requires the straight channel G=-1, H=1");
  }
  F.self_check();

  CaseContext ctx;
  ctx.shape = shape;
  ctx.F = F;
  ctx.nx = nx;
  ctx.ns = ns;
  ctx.profile = solve_shear(F, shape.c_bottom, shape.c_top, ns);
  ctx.base_grid = build_grid(shape.base(), nx, ns);
  ctx.lambda1 = smallest_eigenvalue(*ctx.base_grid);
  ctx.psi0_base = ScalarField(ctx.base_grid);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) ctx.psi0_base(i, j) = ctx.profile.psi()[j];
  }
  ctx.phi = solve_first_order(ctx.base_grid, F, ctx.psi0_base, shape);
  return ctx;
}

EpsilonRun run_epsilon(const CaseContext& ctx, double epsilon, const RunOptions& opts) {
  EpsilonRun run;
  run.epsilon = epsilon;
  const BoundaryShape shape_eps = ctx.shape.with_epsilon(epsilon);
  const double reach = epsilon * std::max(shape_eps.top_bump.sup_bound(),
                                          shape_eps.bottom_bump.sup_bound());
  const ShearExtension extension(ctx.profile, ctx.F, reach + 0.05);

  run.steady = solve_steady_on_shape(shape_eps, ctx.F, ctx.nx, ctx.ns, ctx.lambda1, extension,
                                     opts.steady);
  run.expansion = compute_remainder(run.steady.field, ctx.profile, ctx.F, ctx.phi, shape_eps);

  if (ctx.profile.has_stagnation()) {
    try {
      run.streamline = singular_streamline(run.steady.field, ctx.profile);
      run.streamline_ok = true;
    } catch (const WindowExit& err) {
      run.streamline_error = err.what();
    }
    run.islands = detect_islands(run.steady.field, ctx.profile, opts.deltas,
                                 {opts.refine, StreamlineOptions{}.window_cap});

    const IslandReport* dominant = nullptr;
    for (const IslandReport& island : run.islands) {
      for (const IslandLevel& lv : island.levels) {
        run.max_height = std::max(run.max_height, lv.height);
      }
      if (!dominant ||
          std::abs(island.center.value - ctx.profile.primary_stagnation().psi) >
              std::abs(dominant->center.value - ctx.profile.primary_stagnation().psi)) {
        dominant = &island;
      }
    }
    if (dominant && dominant->center.kind != CriticalKind::Degenerate) {
      run.hessian = hessian_diagnostic(run.steady.field, dominant->center, epsilon);
      run.hessian_ok = true;
    }
  }

  if (opts.run_fixed_point) {
    run.fixed_point_ran = true;
    try {
      run.fixed_point = fixed_point_solve(run.steady.field.grid_ptr(), ctx.F, ctx.profile,
                                          ctx.phi, shape_eps, opts.fp_max_iter);
      run.fixed_point_ok = run.fixed_point.converged;
      ScalarField recon = run.fixed_point.u_eps;
      for (std::size_t k = 0; k < recon.data().size(); ++k) {
        recon.data()[k] += run.fixed_point.eta_eps.data()[k];
      }
      run.reconstruction_error = recon.max_abs_diff(run.expansion.r_eps);
    } catch (const NotContracting& err) {
      run.fixed_point_error = err.what();
    }
  }
  return run;
}

}  // namespace islandlab
