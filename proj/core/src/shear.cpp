#include "islandlab/shear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "islandlab/errors.hpp"
#include "islandlab/interpolate.hpp"

namespace islandlab {

namespace {

constexpr double kLambda1Flat = 2.467401100272339654708622749969;  // pi^2/4

// 4th-order first derivative of uniform samples, one-sided at the ends.
std::vector<double> derivative4(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<double> d(n);
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
  for (int j = 2; j < n - 2; ++j) {
    d[j] = (-f[j + 2] + 8.0 * f[j + 1] - 8.0 * f[j - 1] + f[j - 2]) / (12.0 * h);
  }
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) /
             (12.0 * h);
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
              3.0 * f[n - 5]) /
             (12.0 * h);
  return d;
}

// Thomas algorithm for the tridiagonal Newton step.
void solve_tridiag(std::vector<double>& diag, std::vector<double>& off_lo,
                   std::vector<double>& off_hi, std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int k = 1; k < n; ++k) {
    const double m = off_lo[k] / diag[k - 1];
    diag[k] -= m * off_hi[k - 1];
    rhs[k] -= m * rhs[k - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int k = n - 2; k >= 0; --k) {
    rhs[k] = (rhs[k] - off_hi[k] * rhs[k + 1]) / diag[k];
  }
}

double interp6(const std::vector<double>& values, double y) {
  const int n = static_cast<int>(values.size());
  const double h = 2.0 / (n - 1);
  const double t = (y + 1.0) / h;
  int start = static_cast<int>(std::floor(t)) - 2;
  start = std::clamp(start, 0, n - 6);
  double w[6];
  lagrange_basis(6, t - start, w);
  double v = 0.0;
  for (int k = 0; k < 6; ++k) v += w[k] * values[start + k];
  return v;
}

}  // namespace

const StagnationPoint& ShearProfile::primary_stagnation() const {
  if (stagnation_.empty()) throw NoStagnation("shear profile has no stagnation point");
  return stagnation_.front();
}

double ShearProfile::value(double y) const { return interp6(psi_, y); }

double ShearProfile::deriv(double y) const { return interp6(dpsi_, y); }

ShearProfile ShearProfile::from_samples(std::vector<double> y, std::vector<double> psi,
                                        std::vector<double> dpsi, double c_bottom, double c_top,
                                        std::vector<StagnationPoint> stagnation) {
  ShearProfile p;
  p.y_ = std::move(y);
  p.psi_ = std::move(psi);
  p.dpsi_ = std::move(dpsi);
  p.c_bottom_ = c_bottom;
  p.c_top_ = c_top;
  p.stagnation_ = std::move(stagnation);
  return p;
}

ShearProfile solve_shear(const Nonlinearity& F, double c_bottom, double c_top, int ny, double tol,
                         int max_iter) {
  if (ny < 8) throw InvalidResolution("solve_shear: ny below minimum 8");

  // a-priori stability bracket around the boundary data
  {
    const double lo = std::min(c_bottom, c_top) - 3.0;
    const double hi = std::max(c_bottom, c_top) + 3.0;
    if (F.min_df(lo, hi) <= -kLambda1Flat + 1e-6) {
      throw StabilityViolated("solve_shear: inf F' <= -lambda1 on the a-priori bracket");
    }
  }

  const double h = 2.0 / (ny - 1);
  std::vector<double> y(ny), psi(ny);
  for (int j = 0; j < ny; ++j) {
    y[j] = -1.0 + h * j;
    psi[j] = c_bottom + (c_top - c_bottom) * 0.5 * (y[j] + 1.0);
  }

  const int nint = ny - 2;
  std::vector<double> res(nint), diag(nint), lo(nint), hi(nint), step(nint);
  auto residual = [&](const std::vector<double>& p, std::vector<double>& r) {
    double rmax = 0.0;
    for (int j = 1; j < ny - 1; ++j) {
      r[j - 1] = (p[j + 1] - 2.0 * p[j] + p[j - 1]) / (h * h) - F.f(p[j]);
      rmax = std::max(rmax, std::abs(r[j - 1]));
    }
    return rmax;
  };

  double rmax = residual(psi, res);
  int iter = 0;
  std::ostringstream history;
  for (; iter < max_iter && rmax > tol; ++iter) {
    for (int j = 1; j < ny - 1; ++j) {
      diag[j - 1] = -2.0 / (h * h) - F.df(psi[j]);
      lo[j - 1] = hi[j - 1] = 1.0 / (h * h);
    }
    for (int k = 0; k < nint; ++k) step[k] = -res[k];
    solve_tridiag(diag, lo, hi, step);

    double alpha = 1.0;
    std::vector<double> trial = psi;
    double rtrial = 0.0;
    while (true) {
      for (int j = 1; j < ny - 1; ++j) trial[j] = psi[j] + alpha * step[j - 1];
      rtrial = residual(trial, res);
      if (rtrial <= (1.0 - 1e-4 * alpha) * rmax) break;
      alpha *= 0.5;
      if (alpha < 1.0 / 1024.0) {
        history << " r=" << rmax;
        throw NewtonDiverged("solve_shear: line search stalled; residuals:" + history.str());
      }
    }
    psi.swap(trial);
    rmax = rtrial;
    history << " r=" << rmax;
  }
  if (rmax > tol) {
    throw NewtonDiverged("solve_shear: residual " + std::to_string(rmax) +
                         " after max iterations; residuals:" + history.str());
  }
  // recompute the residual vector for the converged iterate (res holds trial data)
  residual(psi, res);

  ShearProfile profile;
  profile.y_ = std::move(y);
  profile.psi_ = std::move(psi);
  profile.dpsi_ = derivative4(profile.psi_, h);
  profile.c_bottom_ = c_bottom;
  profile.c_top_ = c_top;

  // stagnation points: nodes where the interpolated derivative changes sign
  double dscale = 1e-300;
  for (double d : profile.dpsi_) dscale = std::max(dscale, std::abs(d));
  const double node_zero = 1e-13 * dscale;
  std::vector<double> roots;
  for (int j = 0; j < ny; ++j) {
    if (std::abs(profile.dpsi_[j]) <= node_zero) {
      roots.push_back(profile.y_[j]);
    }
  }
  for (int j = 0; j < ny - 1; ++j) {
    const double a = profile.dpsi_[j], b = profile.dpsi_[j + 1];
    if (std::abs(a) <= node_zero || std::abs(b) <= node_zero) continue;
    if (a * b < 0.0) {
      double ylo = profile.y_[j], yhi = profile.y_[j + 1];
      double flo = profile.deriv(ylo);
      for (int it = 0; it < 200 && yhi - ylo > 1e-12; ++it) {
        const double ymid = 0.5 * (ylo + yhi);
        const double fmid = profile.deriv(ymid);
        if ((flo < 0.0) == (fmid < 0.0)) {
          ylo = ymid;
          flo = fmid;
        } else {
          yhi = ymid;
        }
      }
      roots.push_back(0.5 * (ylo + yhi));
    }
  }
  std::sort(roots.begin(), roots.end());
  for (double r : roots) {
    if (!profile.stagnation_.empty() && r - profile.stagnation_.back().y < 1e-9) continue;
    if (r <= -1.0 + 1e-12 || r >= 1.0 - 1e-12) continue;  // interior stagnation only
    const double p = profile.value(r);
    profile.stagnation_.push_back({r, p, F.f(p)});
  }
  return profile;
}

ShearExtension::ShearExtension(const ShearProfile& profile, const Nonlinearity& F, double margin)
    : profile_(&profile), margin_(margin), step_(1e-3) {
  const int nsteps = static_cast<int>(std::ceil(margin / step_)) + 2;
  auto integrate = [&](double y0, double p0, double d0, double dir, std::vector<double>& ps,
                       std::vector<double>& ds) {
    ps.resize(nsteps + 1);
    ds.resize(nsteps + 1);
    ps[0] = p0;
    ds[0] = d0;
    double p = p0, d = d0;
    const double hstep = dir * step_;
    (void)y0;
    for (int k = 0; k < nsteps; ++k) {
      // RK4 on (psi, psi')' = (psi', F(psi))
      const double k1p = d, k1d = F.f(p);
      const double k2p = d + 0.5 * hstep * k1d, k2d = F.f(p + 0.5 * hstep * k1p);
      const double k3p = d + 0.5 * hstep * k2d, k3d = F.f(p + 0.5 * hstep * k2p);
      const double k4p = d + hstep * k3d, k4d = F.f(p + hstep * k3p);
      p += hstep / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      d += hstep / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
      ps[k + 1] = p;
      ds[k + 1] = d;
    }
  };
  integrate(1.0, profile.psi().back(), profile.deriv_top(), +1.0, top_psi_, top_dpsi_);
  integrate(-1.0, profile.psi().front(), profile.deriv_bottom(), -1.0, bot_psi_, bot_dpsi_);
}

namespace {

// cubic Hermite on a chain sampled at |y| = 1 + k*step
double hermite_eval(const std::vector<double>& ps, const std::vector<double>& ds, double step,
                    double dist, double sign, bool want_deriv) {
  int k = static_cast<int>(std::floor(dist / step));
  k = std::clamp(k, 0, static_cast<int>(ps.size()) - 2);
  const double t = dist / step - k;
  const double f0 = ps[k], f1 = ps[k + 1];
  const double d0 = sign * step * ds[k], d1 = sign * step * ds[k + 1];
  if (!want_deriv) {
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return f0 * h00 + d0 * h10 + f1 * h01 + d1 * h11;
  }
  const double g00 = 6.0 * t * (t - 1.0);
  const double g10 = (1.0 - t) * (1.0 - 3.0 * t);
  const double g01 = -6.0 * t * (t - 1.0);
  const double g11 = t * (3.0 * t - 2.0);
  return (f0 * g00 + d0 * g10 + f1 * g01 + d1 * g11) / (sign * step);
}

}  // namespace

double ShearExtension::value(double y) const {
  if (y > 1.0) return hermite_eval(top_psi_, top_dpsi_, step_, y - 1.0, +1.0, false);
  if (y < -1.0) return hermite_eval(bot_psi_, bot_dpsi_, step_, -1.0 - y, -1.0, false);
  return profile_->value(y);
}

double ShearExtension::deriv(double y) const {
  if (y > 1.0) return hermite_eval(top_psi_, top_dpsi_, step_, y - 1.0, +1.0, true);
  if (y < -1.0) return hermite_eval(bot_psi_, bot_dpsi_, step_, -1.0 - y, -1.0, true);
  return profile_->deriv(y);
}

}  // namespace islandlab
