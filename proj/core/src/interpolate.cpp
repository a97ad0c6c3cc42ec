#include "islandlab/interpolate.hpp"

#include <algorithm>
#include <cmath>

namespace islandlab {

void lagrange_basis(int n, double t, double* w) {
  for (int i = 0; i < n; ++i) {
    double num = 1.0, den = 1.0;
    for (int m = 0; m < n; ++m) {
      if (m == i) continue;
      num *= t - m;
      den *= i - m;
    }
    w[i] = num / den;
  }
}

void lagrange_basis_d(int n, double t, double* w) {
  for (int i = 0; i < n; ++i) {
    double den = 1.0;
    for (int m = 0; m < n; ++m) {
      if (m != i) den *= i - m;
    }
    double sum = 0.0;
    for (int p = 0; p < n; ++p) {
      if (p == i) continue;
      double prod = 1.0;
      for (int m = 0; m < n; ++m) {
        if (m == i || m == p) continue;
        prod *= t - m;
      }
      sum += prod;
    }
    w[i] = sum / den;
  }
}

void lagrange_basis_dd(int n, double t, double* w) {
  for (int i = 0; i < n; ++i) {
    double den = 1.0;
    for (int m = 0; m < n; ++m) {
      if (m != i) den *= i - m;
    }
    double sum = 0.0;
    for (int p = 0; p < n; ++p) {
      if (p == i) continue;
      for (int q = 0; q < n; ++q) {
        if (q == i || q == p) continue;
        double prod = 1.0;
        for (int m = 0; m < n; ++m) {
          if (m == i || m == p || m == q) continue;
          prod *= t - m;
        }
        sum += prod;
      }
    }
    w[i] = sum / den;
  }
}

namespace {

// cubic Hermite bases on [0, 1]: value pair hv, tangent pair ht
struct HermiteBasis {
  double hv[2], ht[2];
};

inline HermiteBasis hermite(double t) {
  const double t2 = t * t, t3 = t2 * t;
  return {{1.0 - 3.0 * t2 + 2.0 * t3, 3.0 * t2 - 2.0 * t3},
          {t - 2.0 * t2 + t3, -t2 + t3}};
}

inline HermiteBasis hermite_d(double t) {
  const double t2 = t * t;
  return {{-6.0 * t + 6.0 * t2, 6.0 * t - 6.0 * t2},
          {1.0 - 4.0 * t + 3.0 * t2, -2.0 * t + 3.0 * t2}};
}

inline HermiteBasis hermite_dd(double t) {
  return {{-6.0 + 12.0 * t, 6.0 - 12.0 * t}, {-4.0 + 6.0 * t, -2.0 + 6.0 * t}};
}

// 4th-order derivative in index units along a sequence accessed by at(k)
template <typename At>
double d4_interior(const At& at, int k) {
  return (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / 12.0;
}

template <typename At>
double d4_edge(const At& at, int n, int k) {
  if (k == 0) return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / 12.0;
  if (k == 1) return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / 12.0;
  if (k == n - 2) {
    return (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) - at(n - 5)) /
           12.0;
  }
  return (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) +
          3.0 * at(n - 5)) /
         12.0;
}

}  // namespace

FieldSampler::FieldSampler(const ScalarField& field)
    : field_(&field), nx_(field.nx()), ns_(field.ns()) {
  const std::size_t n = static_cast<std::size_t>(nx_) * ns_;
  fx_.resize(n);
  fs_.resize(n);
  fxs_.resize(n);
  const MappedGrid& g = field.grid();
  for (int j = 0; j < ns_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      auto at = [&](int k) { return field(g.wrap(k), j); };
      fx_[static_cast<std::size_t>(i) * ns_ + j] = d4_interior(at, i);
    }
  }
  for (int i = 0; i < nx_; ++i) {
    auto at = [&](int k) { return field(i, k); };
    for (int j = 0; j < ns_; ++j) {
      fs_[static_cast<std::size_t>(i) * ns_ + j] =
          (j >= 2 && j <= ns_ - 3) ? d4_interior(at, j) : d4_edge(at, ns_, j);
    }
  }
  for (int j = 0; j < ns_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      auto at = [&](int k) { return fs_[static_cast<std::size_t>(g.wrap(k)) * ns_ + j]; };
      fxs_[static_cast<std::size_t>(i) * ns_ + j] = d4_interior(at, i);
    }
  }
}

namespace {

struct CellRef {
  int i0, j0;      // lower-left node
  double xi, eta;  // local coordinates in [0, 1]
};

inline CellRef locate(double x, double s, int ns, double dx, double ds) {
  const double xi_raw = x / dx;
  const double cx = std::floor(xi_raw);
  double eta_raw = s / ds;
  int j0 = static_cast<int>(std::floor(eta_raw));
  j0 = std::clamp(j0, 0, ns - 2);
  return {static_cast<int>(cx), j0, xi_raw - cx, eta_raw - j0};
}

}  // namespace

FieldSampler::Ref FieldSampler::ref(double x, double s) const {
  const MappedGrid& g = field_->grid();
  const double dx = g.dx(), ds = g.ds();
  const CellRef c = locate(x, s, ns_, dx, ds);

  const HermiteBasis bx = hermite(c.xi), bxd = hermite_d(c.xi), bxdd = hermite_dd(c.xi);
  const HermiteBasis bs = hermite(c.eta), bsd = hermite_d(c.eta), bsdd = hermite_dd(c.eta);

  double v = 0, vx = 0, vs = 0, vxx = 0, vxs = 0, vss = 0;
  for (int a = 0; a < 2; ++a) {
    const int i = g.wrap(c.i0 + a);
    for (int b = 0; b < 2; ++b) {
      const int j = c.j0 + b;
      const std::size_t k = static_cast<std::size_t>(i) * ns_ + j;
      const double f = (*field_)(i, j);
      const double dfx = fx_[k], dfs = fs_[k], dfxs = fxs_[k];
      v += f * bx.hv[a] * bs.hv[b] + dfx * bx.ht[a] * bs.hv[b] + dfs * bx.hv[a] * bs.ht[b] +
           dfxs * bx.ht[a] * bs.ht[b];
      vx += f * bxd.hv[a] * bs.hv[b] + dfx * bxd.ht[a] * bs.hv[b] + dfs * bxd.hv[a] * bs.ht[b] +
            dfxs * bxd.ht[a] * bs.ht[b];
      vs += f * bx.hv[a] * bsd.hv[b] + dfx * bx.ht[a] * bsd.hv[b] + dfs * bx.hv[a] * bsd.ht[b] +
            dfxs * bx.ht[a] * bsd.ht[b];
      vxx += f * bxdd.hv[a] * bs.hv[b] + dfx * bxdd.ht[a] * bs.hv[b] +
             dfs * bxdd.hv[a] * bs.ht[b] + dfxs * bxdd.ht[a] * bs.ht[b];
      vxs += f * bxd.hv[a] * bsd.hv[b] + dfx * bxd.ht[a] * bsd.hv[b] +
             dfs * bxd.hv[a] * bsd.ht[b] + dfxs * bxd.ht[a] * bsd.ht[b];
      vss += f * bx.hv[a] * bsdd.hv[b] + dfx * bx.ht[a] * bsdd.hv[b] +
             dfs * bx.hv[a] * bsdd.ht[b] + dfxs * bx.ht[a] * bsdd.ht[b];
    }
  }
  return {v, vx / dx, vs / ds, vxx / (dx * dx), vxs / (dx * ds), vss / (ds * ds)};
}

double FieldSampler::value(double x, double s) const {
  const MappedGrid& g = field_->grid();
  const CellRef c = locate(x, s, ns_, g.dx(), g.ds());
  const HermiteBasis bx = hermite(c.xi);
  const HermiteBasis bs = hermite(c.eta);
  double v = 0;
  for (int a = 0; a < 2; ++a) {
    const int i = g.wrap(c.i0 + a);
    for (int b = 0; b < 2; ++b) {
      const int j = c.j0 + b;
      const std::size_t k = static_cast<std::size_t>(i) * ns_ + j;
      v += (*field_)(i, j) * bx.hv[a] * bs.hv[b] + fx_[k] * bx.ht[a] * bs.hv[b] +
           fs_[k] * bx.hv[a] * bs.ht[b] + fxs_[k] * bx.ht[a] * bs.ht[b];
    }
  }
  return v;
}

FieldSampler::Phys FieldSampler::physical(double x, double s) const {
  const Ref r = ref(x, s);
  const BoundaryShape& sh = field_->grid().shape();
  const double T = sh.thickness(x);
  const double bd = sh.bottom_deriv(x);
  const double bdd = sh.bottom_deriv2(x);
  const double Td = sh.top_deriv(x) - bd;
  const double Tdd = sh.top_deriv2(x) - bdd;
  const double a = (bd + s * Td) / T;
  const double a_x = (bdd + s * Tdd) / T - a * Td / T;
  const double a_s = Td / T;

  Phys p;
  p.v = r.v;
  p.dy = r.vs / T;
  p.dyy = r.vss / (T * T);
  p.dx = r.vx - a * r.vs;
  p.dxy = (r.vxs - a_s * r.vs - a * r.vss) / T;
  p.dxx = r.vxx - 2.0 * a * r.vxs + a * a * r.vss - (a_x - a * a_s) * r.vs;
  return p;
}

FieldSampler::Phys FieldSampler::physical_at_y(double x, double y) const {
  const BoundaryShape& sh = field_->grid().shape();
  const double s = (y - sh.bottom(x)) / sh.thickness(x);
  return physical(x, s);
}

double FieldSampler::column_value(int i, double s) const {
  const MappedGrid& g = field_->grid();
  const double eta_raw = s / g.ds();
  int j0 = std::clamp(static_cast<int>(std::floor(eta_raw)), 0, ns_ - 2);
  const double t = eta_raw - j0;
  const HermiteBasis b = hermite(t);
  const std::size_t k = static_cast<std::size_t>(i) * ns_ + j0;
  return (*field_)(i, j0) * b.hv[0] + (*field_)(i, j0 + 1) * b.hv[1] + fs_[k] * b.ht[0] +
         fs_[k + 1] * b.ht[1];
}

double FieldSampler::column_deriv_s(int i, double s) const {
  const MappedGrid& g = field_->grid();
  const double eta_raw = s / g.ds();
  int j0 = std::clamp(static_cast<int>(std::floor(eta_raw)), 0, ns_ - 2);
  const double t = eta_raw - j0;
  const HermiteBasis b = hermite_d(t);
  const std::size_t k = static_cast<std::size_t>(i) * ns_ + j0;
  return ((*field_)(i, j0) * b.hv[0] + (*field_)(i, j0 + 1) * b.hv[1] + fs_[k] * b.ht[0] +
          fs_[k + 1] * b.ht[1]) /
         g.ds();
}

}  // namespace islandlab
