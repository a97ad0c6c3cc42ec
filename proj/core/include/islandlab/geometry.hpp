#pragma once

#include <memory>
#include <vector>

#include "islandlab/errors.hpp"
#include "islandlab/fourier.hpp"

namespace islandlab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Periodic channel bounded below by G(x) - eps*g(x) and above by
/// H(x) + eps*h(x). Positive bumps g, h push the walls outward, so the
/// family h + g == const is exactly the vertical channel translations
/// (at first order) and carries no island content.
struct BoundaryShape {
  FourierSeries base_bottom = FourierSeries::constant(-1.0);  // G
  FourierSeries base_top = FourierSeries::constant(1.0);      // H
  FourierSeries bottom_bump;                                  // g
  FourierSeries top_bump;                                     // h
  double epsilon = 0.0;
  double c_bottom = 0.0;  // stream value on the bottom wall
  double c_top = 0.0;     // stream value on the top wall

  double bottom(double x) const { return base_bottom.value(x) - epsilon * bottom_bump.value(x); }
  double top(double x) const { return base_top.value(x) + epsilon * top_bump.value(x); }
  double bottom_deriv(double x) const { return base_bottom.deriv(x) - epsilon * bottom_bump.deriv(x); }
  double top_deriv(double x) const { return base_top.deriv(x) + epsilon * top_bump.deriv(x); }
  double bottom_deriv2(double x) const { return base_bottom.deriv2(x) - epsilon * bottom_bump.deriv2(x); }
  double top_deriv2(double x) const { return base_top.deriv2(x) + epsilon * top_bump.deriv2(x); }
  double thickness(double x) const { return top(x) - bottom(x); }

  BoundaryShape with_epsilon(double eps) const {
    BoundaryShape s = *this;
    s.epsilon = eps;
    return s;
  }
  /// The unperturbed shape (epsilon = 0).
  BoundaryShape base() const { return with_epsilon(0.0); }

  /// Checks coefficient sanity and top > bottom on a fine audit grid.
  void validate(int audit_samples = 2048) const;

  static BoundaryShape flat_channel(double c_bottom = 0.0, double c_top = 0.0);
};

/// True iff h + g has a non-constant Fourier mode above tol_rel relative to
/// the largest coefficient, i.e. h'(x) + g'(x) is not identically zero.
bool membership_b_prime(const BoundaryShape& shape, double tol_rel = 1e-10);

/// Tensor grid on the reference rectangle [0, 2pi) x [0, 1] carrying the
/// boundary-fitted map y(x, s) = bottom(x) + s * thickness(x). All metric
/// terms come from analytic differentiation of the Fourier boundaries.
class MappedGrid {
 public:
  MappedGrid(const BoundaryShape& shape, int nx, int ns);

  int nx() const { return nx_; }
  int ns() const { return ns_; }
  double dx() const { return kTwoPi / nx_; }
  double ds() const { return 1.0 / (ns_ - 1); }
  double x(int i) const { return xs_[i]; }
  double s(int j) const { return ss_[j]; }
  double y(int i, int j) const { return bot_[i] + ss_[j] * thick_[i]; }
  double y_of(int i, double s) const { return bot_[i] + s * thick_[i]; }
  double s_of(int i, double y) const { return (y - bot_[i]) / thick_[i]; }
  int wrap(int i) const { return ((i % nx_) + nx_) % nx_; }

  const BoundaryShape& shape() const { return shape_; }
  bool is_flat() const { return flat_; }

  double bottom(int i) const { return bot_[i]; }
  double bottom_d(int i) const { return bot_d_[i]; }
  double bottom_dd(int i) const { return bot_dd_[i]; }
  double thickness(int i) const { return thick_[i]; }
  double thickness_d(int i) const { return thick_d_[i]; }
  double thickness_dd(int i) const { return thick_dd_[i]; }

  /// a(x, s) = (bottom' + s thickness') / thickness.
  double a(int i, double s) const { return (bot_d_[i] + s * thick_d_[i]) / thick_[i]; }
  /// partial_x a at fixed s.
  double a_x(int i, double s) const {
    return (bot_dd_[i] + s * thick_dd_[i]) / thick_[i] - a(i, s) * thick_d_[i] / thick_[i];
  }
  /// partial_s a.
  double a_s(int i) const { return thick_d_[i] / thick_[i]; }

  /// Coefficients of the mapped Laplacian
  ///   Lap u = cxx v_xx + cxs v_xs + css v_ss + cs v_s
  /// for u(x, y) = v(x, s(x, y)).
  struct LaplacianCoefs {
    double cxx, cxs, css, cs;
  };
  LaplacianCoefs laplacian_coefs(int i, double s) const {
    const double av = a(i, s);
    const double T = thick_[i];
    return {1.0, -2.0 * av, av * av + 1.0 / (T * T), -(a_x(i, s) - av * a_s(i))};
  }

 private:
  BoundaryShape shape_;
  int nx_, ns_;
  bool flat_;
  std::vector<double> xs_, ss_;
  std::vector<double> bot_, bot_d_, bot_dd_, thick_, thick_d_, thick_dd_;
};

/// Builds a grid; throws InvalidResolution or BoundaryCrossing.
std::shared_ptr<const MappedGrid> build_grid(const BoundaryShape& shape, int nx, int ns);

}  // namespace islandlab
