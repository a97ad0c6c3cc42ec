#include "islandlab/nonlinearity.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "islandlab/errors.hpp"
#include "islandlab/rng.hpp"

namespace islandlab {

Nonlinearity Nonlinearity::constant(double c) {
  Nonlinearity F;
  F.poly_ = {c};
  return F;
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  Nonlinearity F;
  F.poly_ = std::move(coeffs);
  return F;
}

void Nonlinearity::set_polynomial(std::vector<double> coeffs) { poly_ = std::move(coeffs); }

void Nonlinearity::add_sin(double amplitude, double omega, double phase) {
  sins_.push_back({amplitude, omega, phase});
}

double Nonlinearity::f(double t) const {
  double v = 0.0;
  for (std::size_t k = poly_.size(); k-- > 0;) v = v * t + poly_[k];
  for (const SinTerm& s : sins_) v += s.amplitude * std::sin(s.omega * t + s.phase);
  return v;
}

double Nonlinearity::df(double t) const {
  double v = 0.0;
  for (std::size_t k = poly_.size(); k-- > 1;) v = v * t + static_cast<double>(k) * poly_[k];
  for (const SinTerm& s : sins_) v += s.amplitude * s.omega * std::cos(s.omega * t + s.phase);
  return v;
}

double Nonlinearity::d2f(double t) const {
  double v = 0.0;
  for (std::size_t k = poly_.size(); k-- > 2;) {
    v = v * t + static_cast<double>(k) * static_cast<double>(k - 1) * poly_[k];
  }
  for (const SinTerm& s : sins_) {
    v -= s.amplitude * s.omega * s.omega * std::sin(s.omega * t + s.phase);
  }
  return v;
}

double Nonlinearity::min_df(double lo, double hi, int samples) const {
  double m = df(lo);
  for (int k = 1; k < samples; ++k) {
    m = std::min(m, df(lo + (hi - lo) * k / (samples - 1)));
  }
  return m;
}

void Nonlinearity::self_check(double lo, double hi, int points, unsigned long long seed) const {
  Rng rng(seed);
  const double step = 1e-5 * std::max(1.0, std::abs(hi - lo));
  for (int k = 0; k < points; ++k) {
    const double t = lo + (hi - lo) * rng.uniform();
    const double fd1 = (f(t + step) - f(t - step)) / (2.0 * step);
    const double fd2 = (df(t + step) - df(t - step)) / (2.0 * step);
    const double scale1 = std::max({1.0, std::abs(df(t)), std::abs(fd1)});
    const double scale2 = std::max({1.0, std::abs(d2f(t)), std::abs(fd2)});
    if (std::abs(fd1 - df(t)) > 1e-6 * scale1 || std::abs(fd2 - d2f(t)) > 1e-6 * scale2) {
      std::ostringstream msg;
      msg << "nonlinearity self-check failed at t = " << t;
      throw Error(msg.str());
    }
  }
}

std::string Nonlinearity::describe() const {
  std::ostringstream out;
  char buf[64];
  out << "F(t) =";
  bool first = true;
  for (std::size_t k = 0; k < poly_.size(); ++k) {
    if (poly_[k] == 0.0 && poly_.size() > 1) continue;
    std::snprintf(buf, sizeof(buf), " %+g", poly_[k]);
    out << buf;
    if (k == 1) out << "*t";
    if (k > 1) out << "*t^" << k;
    first = false;
  }
  for (const SinTerm& s : sins_) {
    std::snprintf(buf, sizeof(buf), " %+g*sin(%g*t%+g)", s.amplitude, s.omega, s.phase);
    out << buf;
    first = false;
  }
  if (first) out << " 0";
  return out.str();
}

}  // namespace islandlab
