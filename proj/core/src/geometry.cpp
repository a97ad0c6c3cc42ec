#include "islandlab/geometry.hpp"

#include <cmath>
#include <sstream>

namespace islandlab {

void BoundaryShape::validate(int audit_samples) const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error("BoundaryShape: epsilon must be finite and >= 0");
  }
  if (!base_bottom.all_finite() || !base_top.all_finite() || !bottom_bump.all_finite() ||
      !top_bump.all_finite()) {
    throw Error("BoundaryShape: non-finite Fourier coefficient");
  }
  if (!std::isfinite(c_bottom) || !std::isfinite(c_top)) {
    throw Error("BoundaryShape: non-finite boundary stream value");
  }
  double min_gap = thickness(0.0);
  double argmin = 0.0;
  for (int i = 0; i < audit_samples; ++i) {
    const double x = kTwoPi * i / audit_samples;
    const double gap = thickness(x);
    if (gap < min_gap) {
      min_gap = gap;
      argmin = x;
    }
  }
  if (!(min_gap > 0.0)) {
    std::ostringstream msg;
    msg << "boundaries touch or cross: thickness " << min_gap << " at x = " << argmin;
    throw BoundaryCrossing(msg.str());
  }
}

BoundaryShape BoundaryShape::flat_channel(double c_bottom, double c_top) {
  BoundaryShape s;
  s.c_bottom = c_bottom;
  s.c_top = c_top;
  return s;
}

bool membership_b_prime(const BoundaryShape& shape, double tol_rel) {
  FourierSeries sum = shape.top_bump;
  sum += shape.bottom_bump;
  return sum.has_nonconstant_mode(tol_rel);
}

MappedGrid::MappedGrid(const BoundaryShape& shape, int nx, int ns) : shape_(shape), nx_(nx), ns_(ns) {
  if (nx < 8 || ns < 8) {
    std::ostringstream msg;
    msg << "grid resolution " << nx << " x " << ns << " below minimum 8 x 8";
    throw InvalidResolution(msg.str());
  }
  shape_.validate();
  xs_.resize(nx_);
  ss_.resize(ns_);
  bot_.resize(nx_);
  bot_d_.resize(nx_);
  bot_dd_.resize(nx_);
  thick_.resize(nx_);
  thick_d_.resize(nx_);
  thick_dd_.resize(nx_);
  for (int i = 0; i < nx_; ++i) {
    const double x = kTwoPi * i / nx_;
    xs_[i] = x;
    bot_[i] = shape_.bottom(x);
    bot_d_[i] = shape_.bottom_deriv(x);
    bot_dd_[i] = shape_.bottom_deriv2(x);
    thick_[i] = shape_.thickness(x);
    thick_d_[i] = shape_.top_deriv(x) - shape_.bottom_deriv(x);
    thick_dd_[i] = shape_.top_deriv2(x) - shape_.bottom_deriv2(x);
  }
  for (int j = 0; j < ns_; ++j) {
    ss_[j] = static_cast<double>(j) / (ns_ - 1);
  }
  flat_ = true;
  for (int i = 0; i < nx_ && flat_; ++i) {
    if (std::abs(bot_d_[i]) > 0.0 || std::abs(thick_d_[i]) > 0.0) flat_ = false;
  }
}

std::shared_ptr<const MappedGrid> build_grid(const BoundaryShape& shape, int nx, int ns) {
  return std::make_shared<const MappedGrid>(shape, nx, ns);
}

}  // namespace islandlab
