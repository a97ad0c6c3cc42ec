#pragma once

#include <memory>
#include <vector>

#include "islandlab/operators.hpp"
#include "islandlab/shear.hpp"

namespace islandlab {

struct TraceExtremum {
  double x;
  double value;
  double second_deriv;
};

/// Trace of a field along the base stagnation line y = y0.
struct TraceRecord {
  std::vector<double> x, value;
  double osc = 0.0;        // max - min
  double max_value = 0.0;
  double min_value = 0.0;
  std::vector<TraceExtremum> maxima;  // polished global maxima
  std::vector<TraceExtremum> minima;  // polished global minima
};

struct ExpansionReport {
  ScalarField phi;    // first-order correction on the base grid
  ScalarField r_eps;  // remainder on the perturbed grid
  double r_max = 0.0;
  double r_lipschitz = 0.0;  // max first-difference quotient
  double r_holder = 0.0;     // r_max + r_lipschitz, the discrete C^0 surrogate
  TraceRecord phi_on_gamma;
  double epsilon = 0.0;
};

struct FixedPointTrace {
  std::vector<double> iterate_norms;  // ||v_k||_inf
  std::vector<double> diff_norms;     // ||v_{k+1} - v_k||_inf
  double contraction_factor = 0.0;    // max ratio of successive diffs after iterate 2
  ScalarField u_eps, eta_eps, beta_eps;
  int iterations = 0;
  bool converged = false;
};

/// Vertical extension of a base-grid field: per-column degree-5 Lagrange
/// polynomials, extrapolating with the clamped end stencil beyond the walls.
class FieldExtension {
 public:
  explicit FieldExtension(const ScalarField& base_field);
  double value(int column, double y) const;
  double deriv(int column, double y) const;

 private:
  const ScalarField* field_;
  double y0_, dy_;
  int ns_;
};

/// First-order correction: (Lap - F'(psi0)) phi = 0 with wall data
/// -h * d_y psi0 on top and +g * d_y psi0 on the bottom (outward bumps).
ScalarField solve_first_order(std::shared_ptr<const MappedGrid> base_grid, const Nonlinearity& F,
                              const ScalarField& psi0_base, const BoundaryShape& shape);

/// Remainder r = psi_eps - extended psi0 - eps * extended phi, with its
/// discrete norms and the Gamma0 trace of phi.
ExpansionReport compute_remainder(const ScalarField& psi_eps, const ShearProfile& profile,
                                  const Nonlinearity& F, const ScalarField& phi,
                                  const BoundaryShape& shape);

/// The wall-data interpolant eta(x, y) = r_top(x) s + r_bot(x) (1 - s).
ScalarField eta_interpolant(std::shared_ptr<const MappedGrid> perturbed_grid,
                            const ShearProfile& profile, const Nonlinearity& F,
                            const ScalarField& phi, const BoundaryShape& shape);

/// Picard iteration v <- (Lap - F'(psi0))^-1 [N(v) - beta] from v = 0;
/// u + eta reconstructs the remainder. Throws NotContracting above 0.95.
FixedPointTrace fixed_point_solve(std::shared_ptr<const MappedGrid> perturbed_grid,
                                  const Nonlinearity& F, const ShearProfile& profile,
                                  const ScalarField& phi, const BoundaryShape& shape,
                                  int max_iter = 60);

/// Cubic-in-s trace of a field along y = y0 with polished global extrema.
TraceRecord gamma0_trace(const ScalarField& field, double y0);
TraceRecord gamma0_trace(const ScalarField& field, const ShearProfile& profile);

struct B0Result {
  bool member = false;
  TraceRecord trace;  // the witness: extrema carry location/value/curvature
};

/// Class of perturbations whose trace has a nonzero, nondegenerate extremum
/// of the sign selected by F(psi0(y0)).
B0Result membership_b0(const BoundaryShape& shape, const Nonlinearity& F,
                       const ShearProfile& profile, int nx = 128, int ns = 129);
B0Result membership_b0_from_trace(const TraceRecord& trace, double curvature,
                                  double phi_max_abs);

}  // namespace islandlab
