#pragma once

#include <vector>

#include "islandlab/nonlinearity.hpp"

namespace islandlab {

struct StagnationPoint {
  double y;
  double psi;
  double curvature;  // F(psi) = psi'' there; its sign picks maxima vs minima
};

/// Base shear state psi0(y) on [-1, 1]: nodal values, derivative samples and
/// stagnation points. The grid spacing matches the vertical resolution of
/// the 2D solves built on top of it.
class ShearProfile {
 public:
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& psi() const { return psi_; }
  const std::vector<double>& dpsi() const { return dpsi_; }
  int ny() const { return static_cast<int>(y_.size()); }
  double dy() const { return 2.0 / (ny() - 1); }

  double c_bottom() const { return c_bottom_; }
  double c_top() const { return c_top_; }
  double deriv_bottom() const { return dpsi_.front(); }
  double deriv_top() const { return dpsi_.back(); }

  const std::vector<StagnationPoint>& stagnation() const { return stagnation_; }
  bool has_stagnation() const { return !stagnation_.empty(); }
  /// The stagnation point used for traces; throws NoStagnation if none.
  const StagnationPoint& primary_stagnation() const;

  /// 6-point Lagrange interpolation of the nodal profile on [-1, 1].
  double value(double y) const;
  double deriv(double y) const;

  /// Direct construction for synthetic test profiles.
  static ShearProfile from_samples(std::vector<double> y, std::vector<double> psi,
                                   std::vector<double> dpsi, double c_bottom, double c_top,
                                   std::vector<StagnationPoint> stagnation);

 private:
  friend ShearProfile solve_shear(const Nonlinearity& F, double c_bottom, double c_top, int ny,
                                  double tol, int max_iter);
  std::vector<double> y_, psi_, dpsi_;
  std::vector<StagnationPoint> stagnation_;
  double c_bottom_ = 0.0, c_top_ = 0.0;
};

/// Newton solve of psi'' = F(psi), psi(-1) = c_bottom, psi(1) = c_top.
/// Stagnation points are located by bisection of the interpolated derivative.
/// Multiple stagnation points are reported, not rejected.
ShearProfile solve_shear(const Nonlinearity& F, double c_bottom, double c_top, int ny,
                         double tol = 1e-10, int max_iter = 50);

/// Smooth evaluation of the shear state on [-1 - margin, 1 + margin]:
/// nodal interpolation inside, RK4 continuation of the ODE outside.
class ShearExtension {
 public:
  ShearExtension(const ShearProfile& profile, const Nonlinearity& F, double margin = 0.5);

  double value(double y) const;
  double deriv(double y) const;
  double margin() const { return margin_; }

 private:
  const ShearProfile* profile_;
  double margin_, step_;
  std::vector<double> top_psi_, top_dpsi_, bot_psi_, bot_dpsi_;
};

}  // namespace islandlab
