#include "islandlab/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "islandlab/errors.hpp"
#include "islandlab/interpolate.hpp"

namespace islandlab {

double couette_phi(const FourierSeries& h, const FourierSeries& g, double x, double y) {
  // affine harmonic completion of the n = 0 mode
  double v = 0.5 * (h.cos_coef(0) + g.cos_coef(0)) + 0.5 * (h.cos_coef(0) - g.cos_coef(0)) * y;
  const int kmax = std::max(h.max_mode(), g.max_mode());
  for (int k = 1; k <= kmax; ++k) {
    const double kk = k;
    const double so = std::sinh(kk * y) / (2.0 * std::sinh(kk));
    const double ce = std::cosh(kk * y) / (2.0 * std::cosh(kk));
    const double ac = std::cos(kk * x), as = std::sin(kk * x);
    v += so * ((h.cos_coef(k) - g.cos_coef(k)) * ac + (h.sin_coef(k) - g.sin_coef(k)) * as);
    v += ce * ((h.cos_coef(k) + g.cos_coef(k)) * ac + (h.sin_coef(k) + g.sin_coef(k)) * as);
  }
  return v;
}

double couette_phi_dy(const FourierSeries& h, const FourierSeries& g, double x, double y) {
  double v = 0.5 * (h.cos_coef(0) - g.cos_coef(0));
  const int kmax = std::max(h.max_mode(), g.max_mode());
  for (int k = 1; k <= kmax; ++k) {
    const double kk = k;
    const double so = kk * std::cosh(kk * y) / (2.0 * std::sinh(kk));
    const double ce = kk * std::sinh(kk * y) / (2.0 * std::cosh(kk));
    const double ac = std::cos(kk * x), as = std::sin(kk * x);
    v += so * ((h.cos_coef(k) - g.cos_coef(k)) * ac + (h.sin_coef(k) - g.sin_coef(k)) * as);
    v += ce * ((h.cos_coef(k) + g.cos_coef(k)) * ac + (h.sin_coef(k) + g.sin_coef(k)) * as);
  }
  return v;
}

double couette_dyphi_mid(const FourierSeries& h, double x) {
  double v = 0.0;
  for (int k = 1; k <= h.max_mode(); ++k) {
    const double kk = k;
    v += kk / std::sinh(kk) * (h.cos_coef(k) * std::cos(kk * x) + h.sin_coef(k) * std::sin(kk * x));
  }
  return v;
}

double ModeProfile::value(double yq) const {
  const int n = static_cast<int>(y.size());
  const double dy = 2.0 / (n - 1);
  const double t = (yq + 1.0) / dy;
  int start = std::clamp(static_cast<int>(std::floor(t)) - 2, 0, n - 6);
  double w[6];
  lagrange_basis(6, t - start, w);
  double v = 0.0;
  for (int k = 0; k < 6; ++k) v += w[k] * phi[start + k];
  return v;
}

ModeProfile mode_ode_solve(int k, const std::vector<double>& fprime_samples, int ny) {
  if (ny < 8) throw InvalidResolution("mode_ode_solve: ny below minimum 8");
  if (static_cast<int>(fprime_samples.size()) != ny) {
    throw GridMismatch("mode_ode_solve: fprime sample count must equal ny");
  }
  const double dy = 2.0 / (ny - 1);
  // tridiagonal (phi'' - (k^2 + F') phi = 0), Dirichlet 0 / 1
  const int nint = ny - 2;
  std::vector<double> diag(nint), lo(nint), hi(nint), rhs(nint, 0.0);
  for (int j = 1; j < ny - 1; ++j) {
    diag[j - 1] = -2.0 / (dy * dy) - (static_cast<double>(k) * k + fprime_samples[j]);
    lo[j - 1] = hi[j - 1] = 1.0 / (dy * dy);
  }
  rhs[nint - 1] -= 1.0 / (dy * dy);  // phi(1) = 1 moved to the right-hand side

  for (int j = 1; j < nint; ++j) {
    if (diag[j - 1] == 0.0) throw SingularSystem("mode_ode_solve: zero pivot");
    const double m = lo[j] / diag[j - 1];
    diag[j] -= m * hi[j - 1];
    rhs[j] -= m * rhs[j - 1];
  }
  if (diag[nint - 1] == 0.0) throw SingularSystem("mode_ode_solve: zero pivot");
  rhs[nint - 1] /= diag[nint - 1];
  for (int j = nint - 2; j >= 0; --j) {
    rhs[j] = (rhs[j] - hi[j] * rhs[j + 1]) / diag[j];
  }

  ModeProfile out;
  out.y.resize(ny);
  out.phi.resize(ny);
  for (int j = 0; j < ny; ++j) out.y[j] = -1.0 + dy * j;
  out.phi[0] = 0.0;
  out.phi[ny - 1] = 1.0;
  for (int j = 1; j < ny - 1; ++j) out.phi[j] = rhs[j - 1];
  return out;
}

std::vector<CriticalPoint> brute_force_extrema(const ScalarField& field, int refine) {
  const MappedGrid& g = field.grid();
  const FieldSampler sampler(field);
  const int m = g.nx() * refine;
  const int n = (g.ns() - 1) * refine + 1;
  const double dxl = g.dx() / refine;
  const double dsl = g.ds() / refine;

  std::vector<double> values(static_cast<std::size_t>(m) * n);
  for (int ci = 0; ci < m; ++ci) {
    const double x = ci * dxl;
    for (int cj = 0; cj < n; ++cj) {
      values[static_cast<std::size_t>(ci) * n + cj] =
          (refine == 1) ? field(ci, cj) : sampler.value(x, std::min(1.0, cj * dsl));
    }
  }
  auto val = [&](int ci, int cj) {
    return values[static_cast<std::size_t>(((ci % m) + m) % m) * n + cj];
  };

  std::vector<CriticalPoint> out;
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double tie = 1e-12 * std::max(scale, 1e-300);  // breaks interpolation roundoff plateaus
  for (int ci = 0; ci < m; ++ci) {
    for (int cj = 1; cj + 1 < n; ++cj) {
      const double c = val(ci, cj);
      bool is_max = true, is_min = true;
      for (int a = -1; a <= 1 && (is_max || is_min); ++a) {
        for (int b = -1; b <= 1; ++b) {
          if (a == 0 && b == 0) continue;
          const double nb = val(ci + a, cj + b);
          if (nb >= c - tie) is_max = false;
          if (nb <= c + tie) is_min = false;
        }
      }
      if (!is_max && !is_min) continue;
      CriticalPoint cp;
      const double x = ci * dxl;
      const double s = cj * dsl;
      const FieldSampler::Phys p = sampler.physical(x, s);
      cp.x = x;
      cp.y = g.shape().bottom(x) + s * g.shape().thickness(x);
      cp.value = c;
      cp.kind = is_max ? CriticalKind::Maximum : CriticalKind::Minimum;
      cp.hxx = p.dxx;
      cp.hxy = p.dxy;
      cp.hyy = p.dyy;
      cp.det = p.dxx * p.dyy - p.dxy * p.dxy;
      out.push_back(cp);
    }
  }
  return out;
}

}  // namespace islandlab
