#include "islandlab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace islandlab {

FourierSeries FourierSeries::constant(double c) {
  FourierSeries f;
  f.set_mode(0, c, 0.0);
  return f;
}

FourierSeries FourierSeries::cosine(int mode, double amplitude) {
  FourierSeries f;
  f.set_mode(mode, amplitude, 0.0);
  return f;
}

FourierSeries FourierSeries::sine(int mode, double amplitude) {
  FourierSeries f;
  f.set_mode(mode, 0.0, amplitude);
  return f;
}

void FourierSeries::set_mode(int k, double cos_coef, double sin_coef) {
  if (k < 0) return;
  if (static_cast<std::size_t>(k) >= cos_.size()) {
    cos_.resize(k + 1, 0.0);
    sin_.resize(k + 1, 0.0);
  }
  cos_[k] = cos_coef;
  sin_[k] = sin_coef;
}

void FourierSeries::add_mode(int k, double cos_coef, double sin_coef) {
  set_mode(k, cos_coef + this->cos_coef(k), sin_coef + this->sin_coef(k));
}

double FourierSeries::value(double x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double kx = static_cast<double>(k) * x;
    v += cos_[k] * std::cos(kx) + sin_[k] * std::sin(kx);
  }
  return v;
}

double FourierSeries::deriv(double x) const {
  double v = 0.0;
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double kx = kk * x;
    v += kk * (-cos_[k] * std::sin(kx) + sin_[k] * std::cos(kx));
  }
  return v;
}

double FourierSeries::deriv2(double x) const {
  double v = 0.0;
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double kx = kk * x;
    v -= kk * kk * (cos_[k] * std::cos(kx) + sin_[k] * std::sin(kx));
  }
  return v;
}

double FourierSeries::cos_coef(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= cos_.size()) return 0.0;
  return cos_[k];
}

double FourierSeries::sin_coef(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= sin_.size()) return 0.0;
  return sin_[k];
}

double FourierSeries::max_abs_coef() const {
  double m = 0.0;
  for (double c : cos_) m = std::max(m, std::abs(c));
  for (double s : sin_) m = std::max(m, std::abs(s));
  return m;
}

double FourierSeries::sup_bound() const {
  double m = 0.0;
  for (double c : cos_) m += std::abs(c);
  for (double s : sin_) m += std::abs(s);
  return m;
}

bool FourierSeries::has_nonconstant_mode(double tol_rel) const {
  const double scale = max_abs_coef();
  if (scale == 0.0) return false;
  const double tol = tol_rel * scale;
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    if (std::abs(cos_[k]) > tol || std::abs(sin_[k]) > tol) return true;
  }
  return false;
}

bool FourierSeries::all_finite() const {
  for (double c : cos_)
    if (!std::isfinite(c)) return false;
  for (double s : sin_)
    if (!std::isfinite(s)) return false;
  return true;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& other) {
  for (int k = 0; k <= other.max_mode(); ++k) {
    add_mode(k, other.cos_coef(k), other.sin_coef(k));
  }
  return *this;
}

FourierSeries& FourierSeries::operator*=(double scale) {
  for (double& c : cos_) c *= scale;
  for (double& s : sin_) s *= scale;
  return *this;
}

FourierSeries FourierSeries::translated(double shift) const {
  // cos(k(x-d)) = cos(kd)cos(kx) + sin(kd)sin(kx), similarly for sin.
  FourierSeries out;
  for (int k = 0; k <= max_mode(); ++k) {
    const double kd = k * shift;
    const double c = std::cos(kd), s = std::sin(kd);
    out.set_mode(k, cos_coef(k) * c - sin_coef(k) * s,
                 sin_coef(k) * c + cos_coef(k) * s);
  }
  return out;
}

}  // namespace islandlab
