#include "islandlab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "islandlab/errors.hpp"
#include "islandlab/interpolate.hpp"

namespace islandlab {

const char* to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::Maximum: return "maximum";
    case CriticalKind::Minimum: return "minimum";
    case CriticalKind::Saddle: return "saddle";
    case CriticalKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

double Contour::min_y() const { return *std::min_element(y.begin(), y.end()); }
double Contour::max_y() const { return *std::max_element(y.begin(), y.end()); }

double Contour::width() const {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

bool Contour::encloses(double px, double py) const {
  if (!closed || x.size() < 3) return false;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  const double shift = kTwoPi * std::round((mean - px) / kTwoPi);
  const double qx = px + shift;
  bool inside = false;
  const std::size_t n = x.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((y[i] > py) != (y[j] > py)) {
      const double t = (py - y[j]) / (y[i] - y[j]);
      const double xc = x[j] + t * (x[i] - x[j]);
      if (qx < xc) inside = !inside;
    }
  }
  return inside;
}

namespace {

// ---------------------------------------------------------------------------
// critical points
// ---------------------------------------------------------------------------

struct GradientArrays {
  std::vector<double> gx, gs;  // centered differences at nodes
  double gx_max = 0.0, gs_max = 0.0;
  double phys_max = 0.0;  // max |grad psi| in physical coordinates
};

GradientArrays node_gradients(const ScalarField& f) {
  const MappedGrid& g = f.grid();
  const int nx = f.nx(), ns = f.ns();
  GradientArrays out;
  out.gx.assign(static_cast<std::size_t>(nx) * ns, 0.0);
  out.gs.assign(static_cast<std::size_t>(nx) * ns, 0.0);
  for (int i = 0; i < nx; ++i) {
    const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
    for (int j = 1; j < ns - 1; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * ns + j;
      out.gx[k] = (f(ip, j) - f(im, j)) / (2.0 * g.dx());
      out.gs[k] = (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.ds());
      out.gx_max = std::max(out.gx_max, std::abs(out.gx[k]));
      out.gs_max = std::max(out.gs_max, std::abs(out.gs[k]));
      const double a = g.a(i, g.s(j));
      out.phys_max = std::max(
          out.phys_max, std::hypot(out.gx[k] - a * out.gs[k], out.gs[k] / g.thickness(i)));
    }
  }
  return out;
}

// physical curvature scale for the degeneracy threshold
double curvature_scale(const ScalarField& f) {
  const MappedGrid& g = f.grid();
  double k = 0.0;
  for (int i = 0; i < f.nx(); ++i) {
    const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
    const double hy = g.thickness(i) * g.ds();
    for (int j = 1; j < f.ns() - 1; ++j) {
      k = std::max(k, std::abs(f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (hy * hy));
      k = std::max(k, std::abs(f(ip, j) - 2.0 * f(i, j) + f(im, j)) / (g.dx() * g.dx()));
    }
  }
  return std::max(k, 1e-300);
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const ScalarField& field,
                                                const FindOptions& opts) {
  const MappedGrid& g = field.grid();
  const int nx = field.nx(), ns = field.ns();
  const FieldSampler sampler(field);
  const GradientArrays grads = node_gradients(field);
  const double gscale = std::max({grads.gx_max, grads.gs_max, 1e-300});
  const double zero_tol = 1e-9 * gscale;

  struct Candidate {
    double x, s;
  };
  std::vector<Candidate> polished;
  std::vector<CriticalPoint> points;
  const double kscale = curvature_scale(field);
  const double tau_d = opts.hess_tol_rel * kscale * kscale;

  auto admissible = [&](const std::vector<double>& a, int i, int j) {
    const int ip = g.wrap(i + 1);
    const double v00 = a[static_cast<std::size_t>(i) * ns + j];
    const double v10 = a[static_cast<std::size_t>(ip) * ns + j];
    const double v01 = a[static_cast<std::size_t>(i) * ns + j + 1];
    const double v11 = a[static_cast<std::size_t>(ip) * ns + j + 1];
    const double lo = std::min({v00, v10, v01, v11});
    const double hi = std::max({v00, v10, v01, v11});
    return (lo <= zero_tol && hi >= -zero_tol);
  };

  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < ns - 2; ++j) {
      if (!admissible(grads.gx, i, j) || !admissible(grads.gs, i, j)) continue;

      double x = g.x(i) + 0.5 * g.dx();
      double s = g.s(j) + 0.5 * g.ds();
      const double x_start = x, s_start = s;
      bool ok = false;
      for (int it = 0; it < 50; ++it) {
        const FieldSampler::Ref r = sampler.ref(x, s);
        if (std::abs(r.vx) <= 1e-11 * gscale && std::abs(r.vs) <= 1e-11 * gscale) {
          ok = true;
          break;
        }
        const double det = r.vxx * r.vss - r.vxs * r.vxs;
        double dx_step, ds_step;
        if (std::abs(det) > 1e-12 * kscale * kscale) {
          dx_step = -(r.vss * r.vx - r.vxs * r.vs) / det;
          ds_step = -(-r.vxs * r.vx + r.vxx * r.vs) / det;
        } else if (std::abs(r.vss) > 1e-12 * kscale) {
          dx_step = 0.0;  // degenerate in x; polish the vertical location only
          ds_step = -r.vs / r.vss;
        } else {
          break;
        }
        dx_step = std::clamp(dx_step, -1.5 * g.dx(), 1.5 * g.dx());
        ds_step = std::clamp(ds_step, -1.5 * g.ds(), 1.5 * g.ds());
        x += dx_step;
        s += ds_step;
        if (std::abs(x - x_start) > 2.5 * g.dx() || std::abs(s - s_start) > 2.5 * g.ds()) break;
        if (s < 0.5 * g.ds() || s > 1.0 - 0.5 * g.ds()) break;
      }
      if (!ok) continue;
      if (s < 0.5 * g.ds() || s > 1.0 - 0.5 * g.ds()) continue;
      if (x < 0.0) x += kTwoPi;
      if (x >= kTwoPi) x -= kTwoPi;

      bool duplicate = false;
      for (const Candidate& c : polished) {
        double ddx = std::abs(c.x - x);
        ddx = std::min(ddx, kTwoPi - ddx);
        if (ddx <= 2.0 * g.dx() && std::abs(c.s - s) <= 2.0 * g.ds()) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      polished.push_back({x, s});

      const FieldSampler::Phys p = sampler.physical(x, s);
      if (std::hypot(p.dx, p.dy) > opts.grad_tol_rel * std::max(grads.phys_max, 1e-300)) continue;

      CriticalPoint cp;
      cp.x = x;
      cp.y = field.grid().shape().bottom(x) + s * field.grid().shape().thickness(x);
      cp.value = p.v;
      cp.hxx = p.dxx;
      cp.hxy = p.dxy;
      cp.hyy = p.dyy;
      cp.det = p.dxx * p.dyy - p.dxy * p.dxy;
      if (std::abs(cp.det) <= tau_d) {
        cp.kind = CriticalKind::Degenerate;
      } else if (cp.det < 0.0) {
        cp.kind = CriticalKind::Saddle;
      } else {
        cp.kind = (p.dxx + p.dyy) < 0.0 ? CriticalKind::Maximum : CriticalKind::Minimum;
      }
      points.push_back(cp);
    }
  }
  std::sort(points.begin(), points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  return points;
}

// ---------------------------------------------------------------------------
// singular streamline
// ---------------------------------------------------------------------------

namespace {

double stagnation_window(const ShearProfile& profile, double cap) {
  const StagnationPoint& s0 = profile.primary_stagnation();
  double gap = std::min(1.0 - s0.y, s0.y + 1.0);
  for (const StagnationPoint& s : profile.stagnation()) {
    if (std::abs(s.y - s0.y) > 1e-12) gap = std::min(gap, 0.5 * std::abs(s.y - s0.y));
  }
  return cap * gap;
}

}  // namespace

StreamlineCurve singular_streamline(const ScalarField& field, const ShearProfile& profile,
                                    const StreamlineOptions& opts) {
  const MappedGrid& g = field.grid();
  const FieldSampler sampler(field);
  const StagnationPoint& s0 = profile.primary_stagnation();
  const double window = stagnation_window(profile, opts.window_cap);

  StreamlineCurve curve;
  curve.y0 = s0.y;
  curve.x.resize(g.nx());
  curve.y.resize(g.nx());
  curve.dy.resize(g.nx());

  for (int i = 0; i < g.nx(); ++i) {
    curve.x[i] = g.x(i);
    const double pad = 0.5 * g.ds() * g.thickness(i);
    double ylo = std::max(s0.y - window, g.y(i, 0) + pad);
    double yhi = std::min(s0.y + window, g.y(i, g.ns() - 1) - pad);
    auto dpsi = [&](double yv) { return sampler.column_deriv_s(i, g.s_of(i, yv)); };
    double flo = dpsi(ylo), fhi = dpsi(yhi);
    if (flo == 0.0) {
      curve.y[i] = ylo;
      continue;
    }
    if (fhi == 0.0) {
      curve.y[i] = yhi;
      continue;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
      std::ostringstream msg;
      msg << "singular_streamline: no sign change in |y - " << s0.y << "| < " << window
          << " at x = " << g.x(i) << " (epsilon beyond the perturbative window)";
      throw WindowExit(msg.str());
    }
    for (int it = 0; it < 100 && yhi - ylo > 1e-13; ++it) {
      const double ym = 0.5 * (ylo + yhi);
      const double fm = dpsi(ym);
      if ((fm < 0.0) == (flo < 0.0)) {
        ylo = ym;
        flo = fm;
      } else {
        yhi = ym;
      }
    }
    curve.y[i] = 0.5 * (ylo + yhi);
  }

  // 4th-order periodic derivative of the sampled curve
  const int n = g.nx();
  for (int i = 0; i < n; ++i) {
    const double ym2 = curve.y[(i + n - 2) % n], ym1 = curve.y[(i + n - 1) % n];
    const double yp1 = curve.y[(i + 1) % n], yp2 = curve.y[(i + 2) % n];
    curve.dy[i] = (-yp2 + 8.0 * yp1 - 8.0 * ym1 + ym2) / (12.0 * g.dx());
  }
  for (int i = 0; i < n; ++i) {
    curve.dist_inf = std::max(curve.dist_inf, std::abs(curve.y[i] - s0.y));
    curve.dist_c1 = std::max(curve.dist_c1, std::abs(curve.dy[i]));
  }
  curve.dist_c1 = std::max(curve.dist_c1, curve.dist_inf);
  return curve;
}

// ---------------------------------------------------------------------------
// marching squares
// ---------------------------------------------------------------------------

namespace {

struct LevelSetGrid {
  const BoundaryShape* shape;
  int m = 0, nrow = 0;  // columns (periodic), rows
  double dx = 0.0, ds = 0.0;
  std::vector<double> values;  // column-major blocks: values[ci * nrow + cj]

  double value(int ci, int cj) const { return values[static_cast<std::size_t>(ci) * nrow + cj]; }
  double xcoord(double ci) const { return ci * dx; }
};

LevelSetGrid sample_lattice(const ScalarField& field, int refine) {
  const MappedGrid& g = field.grid();
  LevelSetGrid lat;
  lat.shape = &g.shape();
  lat.m = g.nx() * refine;
  lat.nrow = (g.ns() - 1) * refine + 1;
  lat.dx = g.dx() / refine;
  lat.ds = g.ds() / refine;
  lat.values.resize(static_cast<std::size_t>(lat.m) * lat.nrow);
  if (refine == 1) {
    for (int i = 0; i < g.nx(); ++i) {
      for (int j = 0; j < g.ns(); ++j) {
        lat.values[static_cast<std::size_t>(i) * lat.nrow + j] = field(i, j);
      }
    }
    return lat;
  }
  const FieldSampler sampler(field);
  for (int ci = 0; ci < lat.m; ++ci) {
    const double x = ci * lat.dx;
    for (int cj = 0; cj < lat.nrow; ++cj) {
      const bool on_node = (ci % refine == 0) && (cj % refine == 0);
      lat.values[static_cast<std::size_t>(ci) * lat.nrow + cj] =
          on_node ? field(ci / refine, cj / refine)
                  : sampler.value(x, std::min(1.0, cj * lat.ds));
    }
  }
  return lat;
}

// edge ids: horizontal edges (along x) then vertical edges (along s)
struct Segment {
  long long e1, e2;
};

long long h_edge(const LevelSetGrid& lat, int ci, int cj) {
  return static_cast<long long>(cj) * lat.m + (ci % lat.m);
}
long long v_edge(const LevelSetGrid& lat, int ci, int cj) {
  const long long base = static_cast<long long>(lat.nrow) * lat.m;
  return base + static_cast<long long>(cj) * lat.m + (ci % lat.m);
}

struct EdgePoint {
  double x;  // in [0, 2pi) (base representative)
  double s;
};

EdgePoint edge_point(const LevelSetGrid& lat, long long id, double level) {
  const long long hcount = static_cast<long long>(lat.nrow) * lat.m;
  if (id < hcount) {
    const int cj = static_cast<int>(id / lat.m);
    const int ci = static_cast<int>(id % lat.m);
    const double va = lat.value(ci, cj);
    const double vb = lat.value((ci + 1) % lat.m, cj);
    const double t = (level - va) / (vb - va);
    return {lat.xcoord(ci + t), cj * lat.ds};
  }
  const long long rem = id - hcount;
  const int cj = static_cast<int>(rem / lat.m);
  const int ci = static_cast<int>(rem % lat.m);
  const double va = lat.value(ci, cj);
  const double vb = lat.value(ci, cj + 1);
  const double t = (level - va) / (vb - va);
  return {lat.xcoord(ci), (cj + t) * lat.ds};
}

std::vector<Contour> march(const LevelSetGrid& lat, double level) {
  std::vector<Segment> segments;
  std::unordered_map<long long, std::pair<int, int>> edge_use;  // edge -> up to 2 segment ids
  auto link = [&](long long e, int seg) {
    auto it = edge_use.find(e);
    if (it == edge_use.end()) {
      edge_use.emplace(e, std::make_pair(seg, -1));
    } else {
      it->second.second = seg;
    }
  };
  auto emit = [&](long long a, long long b) {
    const int idx = static_cast<int>(segments.size());
    segments.push_back({a, b});
    link(a, idx);
    link(b, idx);
  };

  for (int ci = 0; ci < lat.m; ++ci) {
    for (int cj = 0; cj + 1 < lat.nrow; ++cj) {
      const int cin = (ci + 1) % lat.m;
      const double v00 = lat.value(ci, cj), v10 = lat.value(cin, cj);
      const double v11 = lat.value(cin, cj + 1), v01 = lat.value(ci, cj + 1);
      int mask = 0;
      if (v00 > level) mask |= 1;
      if (v10 > level) mask |= 2;
      if (v11 > level) mask |= 4;
      if (v01 > level) mask |= 8;
      if (mask == 0 || mask == 15) continue;

      const long long B = h_edge(lat, ci, cj);
      const long long T = h_edge(lat, ci, cj + 1);
      const long long L = v_edge(lat, ci, cj);
      const long long R = v_edge(lat, cin, cj);

      switch (mask) {
        case 1: case 14: emit(L, B); break;
        case 2: case 13: emit(B, R); break;
        case 3: case 12: emit(L, R); break;
        case 4: case 11: emit(R, T); break;
        case 6: case 9: emit(B, T); break;
        case 7: case 8: emit(L, T); break;
        case 5: {  // c00 and c11 above
          const double center = 0.25 * (v00 + v10 + v11 + v01);
          if (center > level) {
            emit(L, T);
            emit(B, R);
          } else {
            emit(L, B);
            emit(R, T);
          }
          break;
        }
        case 10: {  // c10 and c01 above
          const double center = 0.25 * (v00 + v10 + v11 + v01);
          if (center > level) {
            emit(L, B);
            emit(R, T);
          } else {
            emit(L, T);
            emit(B, R);
          }
          break;
        }
        default: break;
      }
    }
  }

  std::vector<Contour> contours;
  std::vector<bool> used(segments.size(), false);

  auto other_segment = [&](long long edge, int seg) -> int {
    const auto it = edge_use.find(edge);
    if (it == edge_use.end()) return -1;
    if (it->second.first == seg) return it->second.second;
    if (it->second.second == seg) return it->second.first;
    return -1;
  };

  for (int s0 = 0; s0 < static_cast<int>(segments.size()); ++s0) {
    if (used[s0]) continue;
    // walk forward from segment s0: e1 -> e2 -> next segment ...
    std::vector<long long> chain;
    chain.push_back(segments[s0].e1);
    chain.push_back(segments[s0].e2);
    used[s0] = true;
    bool closed = false;
    int cur = s0;
    long long lead = segments[s0].e2;
    while (true) {
      const int nxt = other_segment(lead, cur);
      if (nxt < 0 || used[nxt]) {
        closed = (nxt == s0) || (chain.front() == chain.back() && chain.size() > 2);
        break;
      }
      used[nxt] = true;
      lead = (segments[nxt].e1 == lead) ? segments[nxt].e2 : segments[nxt].e1;
      chain.push_back(lead);
      cur = nxt;
      if (lead == chain.front()) {
        closed = true;
        break;
      }
    }
    if (!closed) {
      // walk the other way and prepend
      std::vector<long long> back;
      cur = s0;
      long long tail = segments[s0].e1;
      while (true) {
        const int nxt = other_segment(tail, cur);
        if (nxt < 0 || used[nxt]) break;
        used[nxt] = true;
        tail = (segments[nxt].e1 == tail) ? segments[nxt].e2 : segments[nxt].e1;
        back.push_back(tail);
        cur = nxt;
      }
      std::reverse(back.begin(), back.end());
      back.insert(back.end(), chain.begin(), chain.end());
      chain.swap(back);
    }

    Contour c;
    c.closed = closed;
    double prev_x = 0.0, offset = 0.0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      if (closed && k + 1 == chain.size()) break;  // last edge repeats the first
      const EdgePoint p = edge_point(lat, chain[k], level);
      double xu = p.x + offset;
      if (k > 0) {
        while (xu - prev_x > kTwoPi / 2) {
          xu -= kTwoPi;
          offset -= kTwoPi;
        }
        while (xu - prev_x < -kTwoPi / 2) {
          xu += kTwoPi;
          offset += kTwoPi;
        }
      }
      prev_x = xu;
      c.x.push_back(xu);
      const double y =
          lat.shape->bottom(p.x) + p.s * lat.shape->thickness(p.x);
      c.y.push_back(y);
    }
    if (closed && !c.x.empty()) {
      // close the polyline with the exact starting point, tracking winding
      const EdgePoint p = edge_point(lat, chain.front(), level);
      double xu = p.x + offset;
      while (xu - prev_x > kTwoPi / 2) xu -= kTwoPi;
      while (xu - prev_x < -kTwoPi / 2) xu += kTwoPi;
      c.winding = static_cast<int>(std::llround((xu - c.x.front()) / kTwoPi));
      c.x.push_back(xu);
      c.y.push_back(c.y.front());
    }
    contours.push_back(std::move(c));
  }
  return contours;
}

}  // namespace

std::vector<Contour> trace_level_set(const ScalarField& field, double level, int refine) {
  if (!(level > field.min() && level < field.max())) {
    throw Error("trace_level_set: level must lie strictly between field min and max");
  }
  return march(sample_lattice(field, refine), level);
}

// ---------------------------------------------------------------------------
// islands
// ---------------------------------------------------------------------------

std::vector<IslandReport> detect_islands(const ScalarField& field, const ShearProfile& profile,
                                         std::span<const double> deltas,
                                         const IslandOptions& opts) {
  const StagnationPoint& s0 = profile.primary_stagnation();
  if (s0.curvature == 0.0) return {};  // degenerate stagnation value, excluded case
  const double window = stagnation_window(profile, opts.window_cap);
  const bool want_max = s0.curvature < 0.0;
  const double eps = field.grid().shape().epsilon;

  const std::vector<CriticalPoint> cps = find_critical_points(field);
  std::vector<const CriticalPoint*> centers;
  std::vector<const CriticalPoint*> saddles;
  for (const CriticalPoint& cp : cps) {
    if (std::abs(cp.y - s0.y) > window) continue;
    if (cp.kind == CriticalKind::Saddle) saddles.push_back(&cp);
    if (want_max && cp.kind == CriticalKind::Maximum) centers.push_back(&cp);
    if (!want_max && cp.kind == CriticalKind::Minimum) centers.push_back(&cp);
  }
  if (centers.empty()) return {};

  std::vector<double> sorted_deltas(deltas.begin(), deltas.end());
  std::sort(sorted_deltas.begin(), sorted_deltas.end());

  const LevelSetGrid lattice = sample_lattice(field, opts.refine);

  std::vector<IslandReport> reports;
  for (const CriticalPoint* center : centers) {
    const double gap = center->value - s0.psi;
    if (gap == 0.0) continue;

    IslandReport report;
    report.center = *center;
    for (const CriticalPoint* sd : saddles) {
      const double v = sd->value;
      const bool between = want_max ? (v < center->value) : (v > center->value);
      if (!between) continue;
      if (!report.has_separatrix ||
          (want_max ? v > report.separatrix_level : v < report.separatrix_level)) {
        report.separatrix_level = v;
        report.has_separatrix = true;
      }
    }

    for (double delta : sorted_deltas) {
      // (1 - delta) family for extrema beyond the stagnation value; the
      // mirrored (1 + delta) family when the extremum falls short of it
      const double level =
          center->value + (want_max ? -1.0 : 1.0) * delta * std::abs(gap);
      std::vector<Contour> contours = march(lattice, level);
      const Contour* best = nullptr;
      for (const Contour& c : contours) {
        if (!c.contractible()) continue;
        if (!c.encloses(center->x, center->y)) continue;
        if (!best || c.height() < best->height()) best = &c;
      }
      if (!best) continue;

      IslandLevel lv;
      lv.delta = delta;
      lv.level = level;
      lv.height = best->height();
      lv.width = best->width();
      double qmin = std::numeric_limits<double>::infinity();
      double qmax = 0.0;
      for (std::size_t k = 0; k < best->x.size(); ++k) {
        const double dxp = std::remainder(best->x[k] - center->x, kTwoPi);
        const double dyp = best->y[k] - center->y;
        const double q = (dyp * dyp + eps * dxp * dxp) / std::max(delta * eps, 1e-300);
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
      }
      lv.c1 = qmin;
      lv.c2 = qmax;
      lv.contour = *best;
      report.levels.push_back(std::move(lv));
    }
    if (!report.levels.empty()) reports.push_back(std::move(report));
  }
  return reports;
}

HessianDiagnostic hessian_diagnostic(const ScalarField& field, const CriticalPoint& pt,
                                     double epsilon) {
  (void)field;
  if (pt.kind == CriticalKind::Degenerate) {
    throw DegenerateHessian("hessian_diagnostic: point is degenerate");
  }
  if (epsilon <= 0.0) throw Error("hessian_diagnostic: epsilon must be positive");
  return {pt.hyy, pt.hxx / epsilon, pt.hxy / epsilon, pt.det / epsilon};
}

}  // namespace islandlab
