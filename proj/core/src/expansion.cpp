#include "islandlab/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "islandlab/errors.hpp"
#include "islandlab/interpolate.hpp"

namespace islandlab {

namespace {

// 4th-order one-sided wall derivative d_y u = v_s / T along a column.
double wall_deriv(const ScalarField& u, int i, bool top) {
  const MappedGrid& g = u.grid();
  const int ns = u.ns();
  const double ds = g.ds();
  double v;
  if (top) {
    v = (25.0 * u(i, ns - 1) - 48.0 * u(i, ns - 2) + 36.0 * u(i, ns - 3) - 16.0 * u(i, ns - 4) +
         3.0 * u(i, ns - 5)) /
        (12.0 * ds);
  } else {
    v = (-25.0 * u(i, 0) + 48.0 * u(i, 1) - 36.0 * u(i, 2) + 16.0 * u(i, 3) - 3.0 * u(i, 4)) /
        (12.0 * ds);
  }
  return v / g.thickness(i);
}

struct ExpansionBasis {
  ShearExtension psi0;
  FieldExtension phi;
};

ExpansionBasis make_basis(const ShearProfile& profile, const Nonlinearity& F,
                          const ScalarField& phi, const BoundaryShape& shape) {
  const double reach =
      shape.epsilon * std::max(shape.top_bump.sup_bound(), shape.bottom_bump.sup_bound());
  return {ShearExtension(profile, F, reach + 0.05), FieldExtension(phi)};
}

void require_matching(const ScalarField& psi_eps, const ShearProfile& profile,
                      const ScalarField& phi, const BoundaryShape& shape) {
  if (psi_eps.nx() != phi.nx() || psi_eps.ns() != phi.ns()) {
    throw GridMismatch("expansion: psi_eps and phi resolutions differ");
  }
  if (profile.ny() != psi_eps.ns()) {
    throw GridMismatch("expansion: shear profile resolution must match ns");
  }
  if (!phi.grid().is_flat()) {
    throw GridMismatch("expansion: phi must live on the straight base grid");
  }
  if (std::abs(psi_eps.grid().shape().epsilon - shape.epsilon) > 1e-15) {
    throw GridMismatch("expansion: shape epsilon does not match the perturbed grid");
  }
}

}  // namespace

FieldExtension::FieldExtension(const ScalarField& base_field)
    : field_(&base_field), ns_(base_field.ns()) {
  const MappedGrid& g = base_field.grid();
  y0_ = g.y(0, 0);
  dy_ = (g.y(0, ns_ - 1) - g.y(0, 0)) / (ns_ - 1);
}

double FieldExtension::value(int column, double y) const {
  const double t = (y - y0_) / dy_;
  int start = static_cast<int>(std::floor(t)) - 2;
  start = std::clamp(start, 0, ns_ - 6);
  double w[6];
  lagrange_basis(6, t - start, w);
  double v = 0.0;
  for (int k = 0; k < 6; ++k) v += w[k] * (*field_)(column, start + k);
  return v;
}

double FieldExtension::deriv(int column, double y) const {
  const double t = (y - y0_) / dy_;
  int start = static_cast<int>(std::floor(t)) - 2;
  start = std::clamp(start, 0, ns_ - 6);
  double w[6];
  lagrange_basis_d(6, t - start, w);
  double v = 0.0;
  for (int k = 0; k < 6; ++k) v += w[k] * (*field_)(column, start + k);
  return v / dy_;
}

ScalarField solve_first_order(std::shared_ptr<const MappedGrid> base_grid, const Nonlinearity& F,
                              const ScalarField& psi0_base, const BoundaryShape& shape) {
  const MappedGrid& g = *base_grid;
  if (psi0_base.nx() != g.nx() || psi0_base.ns() != g.ns()) {
    throw GridMismatch("solve_first_order: psi0 grid mismatch");
  }
  const int nx = g.nx();
  std::vector<double> top(nx), bottom(nx);
  for (int i = 0; i < nx; ++i) {
    const double x = g.x(i);
    top[i] = -shape.top_bump.value(x) * wall_deriv(psi0_base, i, true);
    bottom[i] = shape.bottom_bump.value(x) * wall_deriv(psi0_base, i, false);
  }

  ScalarField fprime(base_grid);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < g.ns(); ++j) fprime(i, j) = F.df(psi0_base(i, j));
  }
  const LinearOperator op = assemble_helmholtz(base_grid, fprime);
  const ScalarField zero(base_grid);
  return solve_dirichlet(op, zero, bottom, top);
}

ExpansionReport compute_remainder(const ScalarField& psi_eps, const ShearProfile& profile,
                                  const Nonlinearity& F, const ScalarField& phi,
                                  const BoundaryShape& shape) {
  require_matching(psi_eps, profile, phi, shape);
  const MappedGrid& g = psi_eps.grid();
  const ExpansionBasis basis = make_basis(profile, F, phi, shape);
  const double eps = shape.epsilon;

  ExpansionReport report;
  report.epsilon = eps;
  report.phi = phi;
  report.r_eps = ScalarField(psi_eps.grid_ptr());
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.ns(); ++j) {
      const double y = g.y(i, j);
      report.r_eps(i, j) = psi_eps(i, j) - basis.psi0.value(y) - eps * basis.phi.value(i, y);
    }
  }
  report.r_max = report.r_eps.max_abs();
  report.r_lipschitz = report.r_eps.lipschitz_quotient();
  report.r_holder = report.r_max + report.r_lipschitz;
  if (profile.has_stagnation()) {
    report.phi_on_gamma = gamma0_trace(phi, profile);
  }
  return report;
}

ScalarField eta_interpolant(std::shared_ptr<const MappedGrid> perturbed_grid,
                            const ShearProfile& profile, const Nonlinearity& F,
                            const ScalarField& phi, const BoundaryShape& shape) {
  const MappedGrid& g = *perturbed_grid;
  if (profile.ny() != g.ns() || phi.ns() != g.ns() || phi.nx() != g.nx()) {
    throw GridMismatch("eta_interpolant: resolution mismatch");
  }
  const ExpansionBasis basis = make_basis(profile, F, phi, shape);
  const double eps = shape.epsilon;

  ScalarField eta(perturbed_grid);
  for (int i = 0; i < g.nx(); ++i) {
    const double ytop = g.y(i, g.ns() - 1);
    const double ybot = g.y(i, 0);
    const double r_top = shape.c_top - basis.psi0.value(ytop) - eps * basis.phi.value(i, ytop);
    const double r_bot = shape.c_bottom - basis.psi0.value(ybot) - eps * basis.phi.value(i, ybot);
    for (int j = 0; j < g.ns(); ++j) {
      const double s = g.s(j);
      eta(i, j) = r_top * s + r_bot * (1.0 - s);
    }
  }
  return eta;
}

FixedPointTrace fixed_point_solve(std::shared_ptr<const MappedGrid> perturbed_grid,
                                  const Nonlinearity& F, const ShearProfile& profile,
                                  const ScalarField& phi, const BoundaryShape& shape,
                                  int max_iter) {
  const MappedGrid& g = *perturbed_grid;
  const int nx = g.nx(), ns = g.ns();
  if (profile.ny() != ns || phi.ns() != ns || phi.nx() != nx) {
    throw GridMismatch("fixed_point_solve: resolution mismatch");
  }
  const ExpansionBasis basis = make_basis(profile, F, phi, shape);
  const double eps = shape.epsilon;

  ScalarField psi0(perturbed_grid), phi_eps(perturbed_grid);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) {
      const double y = g.y(i, j);
      psi0(i, j) = basis.psi0.value(y);
      phi_eps(i, j) = eps * basis.phi.value(i, y);
    }
  }
  const ScalarField eta = eta_interpolant(perturbed_grid, profile, F, phi, shape);

  ScalarField fprime(perturbed_grid);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) fprime(i, j) = F.df(psi0(i, j));
  }
  const LinearOperator lap = assemble_laplacian(perturbed_grid);
  const LinearOperator helm = assemble_helmholtz(perturbed_grid, fprime);
  const DirichletSolver solver(helm);

  // defects of the extended expansion under the discrete operator; both
  // vanish identically on the straight channel
  const ScalarField lap_psi0 = lap.apply(psi0);
  const ScalarField helm_phi = helm.apply(phi_eps);
  FixedPointTrace trace;
  trace.eta_eps = eta;
  trace.beta_eps = helm.apply(eta);

  ScalarField v(perturbed_grid);  // v_0 = 0
  ScalarField rhs(perturbed_grid);
  double prev_diff = -1.0;
  for (int k = 0; k < max_iter; ++k) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 1; j < ns - 1; ++j) {
        const double base = psi0(i, j);
        const double bump = phi_eps(i, j) + v(i, j) + eta(i, j);
        const double nval = F.f(base + bump) - F.f(base) - F.df(base) * bump +
                            (F.f(base) - lap_psi0(i, j)) - helm_phi(i, j);
        rhs(i, j) = nval - trace.beta_eps(i, j);
      }
    }
    ScalarField next = solver.solve_zero_bc(rhs);
    const double diff = next.max_abs_diff(v);
    trace.diff_norms.push_back(diff);
    trace.iterate_norms.push_back(next.max_abs());
    v = std::move(next);
    trace.iterations = k + 1;

    const double floor = 1e-14 * std::max(1.0, v.max_abs());
    if (k >= 2 && prev_diff > floor) {
      const double ratio = diff / prev_diff;
      trace.contraction_factor = std::max(trace.contraction_factor, ratio);
      if (ratio > 0.95) {
        throw NotContracting("fixed_point_solve: contraction factor " + std::to_string(ratio));
      }
    }
    if (diff <= 1e-12) {
      trace.converged = true;
      break;
    }
    prev_diff = diff;
  }
  trace.u_eps = std::move(v);
  return trace;
}

namespace {

// polish a candidate extremum of periodic samples with a local quartic
TraceExtremum polish_extremum(const std::vector<double>& xs, const std::vector<double>& vals,
                              int idx, double sign) {
  const int n = static_cast<int>(xs.size());
  const double dx = kTwoPi / n;
  double nodes[5];
  const double xc = xs[idx];
  for (int k = -2; k <= 2; ++k) {
    nodes[k + 2] = sign * vals[((idx + k) % n + n) % n];
  }
  // Newton on the quartic's derivative, clamped to the stencil
  double t = 2.0;  // node units from the stencil start; start = idx - 2
  for (int it = 0; it < 40; ++it) {
    double wd[5], wdd[5];
    lagrange_basis_d(5, t, wd);
    lagrange_basis_dd(5, t, wdd);
    double d1 = 0.0, d2 = 0.0;
    for (int k = 0; k < 5; ++k) {
      d1 += wd[k] * nodes[k];
      d2 += wdd[k] * nodes[k];
    }
    if (d2 >= 0.0) break;  // flat or wrong curvature; keep current t
    const double step = -d1 / d2;
    t += std::clamp(step, -1.0, 1.0);
    t = std::clamp(t, 1.0, 3.0);
    if (std::abs(step) < 1e-13) break;
  }
  double w[5], wdd[5];
  lagrange_basis(5, t, w);
  lagrange_basis_dd(5, t, wdd);
  double val = 0.0, d2 = 0.0;
  for (int k = 0; k < 5; ++k) {
    val += w[k] * nodes[k];
    d2 += wdd[k] * nodes[k];
  }
  double x = xc + (t - 2.0) * dx;
  if (x < 0.0) x += kTwoPi;
  if (x >= kTwoPi) x -= kTwoPi;
  return {x, sign * val, sign * d2 / (dx * dx)};
}

std::vector<TraceExtremum> global_extrema(const std::vector<double>& xs,
                                          const std::vector<double>& vals, double sign) {
  const int n = static_cast<int>(xs.size());
  double best = -1e300;
  for (double v : vals) best = std::max(best, sign * v);
  double scale = 0.0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  const double tie = 1e-6 * std::max(scale, 1e-300);

  std::vector<TraceExtremum> found;
  for (int i = 0; i < n; ++i) {
    const double c = sign * vals[i];
    const double l = sign * vals[(i + n - 1) % n];
    const double r = sign * vals[(i + 1) % n];
    if (c < best - tie || c < l || c < r) continue;
    TraceExtremum e = polish_extremum(xs, vals, i, sign);
    bool duplicate = false;
    for (const TraceExtremum& other : found) {
      double d = std::abs(e.x - other.x);
      d = std::min(d, kTwoPi - d);
      if (d < 0.75 * kTwoPi / n) duplicate = true;
    }
    if (!duplicate) found.push_back(e);
  }
  // keep only ties with the best polished value
  double best_polished = -1e300;
  for (const TraceExtremum& e : found) best_polished = std::max(best_polished, sign * e.value);
  std::vector<TraceExtremum> out;
  for (const TraceExtremum& e : found) {
    if (sign * e.value >= best_polished - tie) out.push_back(e);
  }
  return out;
}

}  // namespace

TraceRecord gamma0_trace(const ScalarField& field, double y0) {
  const MappedGrid& g = field.grid();
  const FieldSampler sampler(field);
  TraceRecord rec;
  rec.x.resize(g.nx());
  rec.value.resize(g.nx());
  for (int i = 0; i < g.nx(); ++i) {
    rec.x[i] = g.x(i);
    rec.value[i] = sampler.column_value(i, g.s_of(i, y0));
  }
  rec.max_value = *std::max_element(rec.value.begin(), rec.value.end());
  rec.min_value = *std::min_element(rec.value.begin(), rec.value.end());
  rec.osc = rec.max_value - rec.min_value;
  rec.maxima = global_extrema(rec.x, rec.value, +1.0);
  rec.minima = global_extrema(rec.x, rec.value, -1.0);
  return rec;
}

TraceRecord gamma0_trace(const ScalarField& field, const ShearProfile& profile) {
  return gamma0_trace(field, profile.primary_stagnation().y);
}

B0Result membership_b0_from_trace(const TraceRecord& trace, double curvature,
                                  double phi_max_abs) {
  B0Result result;
  result.trace = trace;
  const double value_tol = 1e-8 * std::max(phi_max_abs, 1e-300);
  const double curv_tol = 1e-3 * trace.osc + 1e-9 * std::max(std::abs(trace.max_value),
                                                             std::abs(trace.min_value));
  const bool use_maxima = curvature < 0.0;
  const auto& extrema = use_maxima ? trace.maxima : trace.minima;
  if (curvature == 0.0 || extrema.empty()) return result;

  for (const TraceExtremum& e : extrema) {
    if (std::abs(e.value) <= value_tol) return result;
    if (use_maxima && !(e.second_deriv < -curv_tol)) return result;
    if (!use_maxima && !(e.second_deriv > curv_tol)) return result;
  }
  result.member = true;
  return result;
}

B0Result membership_b0(const BoundaryShape& shape, const Nonlinearity& F,
                       const ShearProfile& profile, int nx, int ns) {
  if (profile.ny() != ns) throw GridMismatch("membership_b0: profile resolution must match ns");
  auto base_grid = build_grid(shape.base(), nx, ns);
  ScalarField psi0(base_grid);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) psi0(i, j) = profile.psi()[j];
  }
  const ScalarField phi = solve_first_order(base_grid, F, psi0, shape);
  const TraceRecord trace = gamma0_trace(phi, profile);
  return membership_b0_from_trace(trace, profile.primary_stagnation().curvature, phi.max_abs());
}

}  // namespace islandlab
