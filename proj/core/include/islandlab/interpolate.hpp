#pragma once

#include <vector>

#include "islandlab/field.hpp"

namespace islandlab {

/// Lagrange basis values/derivatives for n uniform nodes at 0..n-1,
/// evaluated at t (t in node units). w must hold n doubles. n <= 8.
void lagrange_basis(int n, double t, double* w);
void lagrange_basis_d(int n, double t, double* w);
void lagrange_basis_dd(int n, double t, double* w);

/// C1 bicubic Hermite sampler for a ScalarField: node derivatives come from
/// 4th-order differences (periodic in x, one-sided at the walls), so the
/// interpolated gradient is continuous across cells and Newton polish on it
/// converges to machine precision. Evaluations are in reference coordinates
/// (x, s); physical() converts derivatives through the channel map.
class FieldSampler {
 public:
  explicit FieldSampler(const ScalarField& field);

  double value(double x, double s) const;
  /// Reference-space partials of the interpolant.
  struct Ref {
    double v, vx, vs, vxx, vxs, vss;
  };
  Ref ref(double x, double s) const;

  /// Physical-space value, gradient and Hessian at reference point (x, s).
  struct Phys {
    double v, dx, dy, dxx, dxy, dyy;
  };
  Phys physical(double x, double s) const;
  Phys physical_at_y(double x, double y) const;

  /// Cubic Hermite interpolation along a grid column.
  double column_value(int i, double s) const;
  double column_deriv_s(int i, double s) const;

  const ScalarField& field() const { return *field_; }
  const MappedGrid& grid() const { return field_->grid(); }

 private:
  const ScalarField* field_;
  int nx_, ns_;
  std::vector<double> fx_, fs_, fxs_;  // node derivatives in index units
};

}  // namespace islandlab
