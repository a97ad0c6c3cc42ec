#pragma once

#include <span>
#include <vector>

#include "islandlab/field.hpp"
#include "islandlab/shear.hpp"

namespace islandlab {

enum class CriticalKind { Maximum, Minimum, Saddle, Degenerate };

const char* to_string(CriticalKind kind);

struct CriticalPoint {
  double x = 0.0, y = 0.0;  // physical coordinates, x in [0, 2pi)
  double value = 0.0;
  CriticalKind kind = CriticalKind::Degenerate;
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;  // physical Hessian
  double det = 0.0;
};

struct Contour {
  std::vector<double> x, y;  // polyline; x unwrapped along the walk
  bool closed = false;
  int winding = 0;  // net x displacement / 2pi for closed contours
  bool contractible() const { return closed && winding == 0; }
  double min_y() const;
  double max_y() const;
  double height() const { return max_y() - min_y(); }
  double width() const;
  bool encloses(double px, double py) const;
};

struct FindOptions {
  double grad_tol_rel = 1e-9;   // acceptance threshold for |grad|
  double hess_tol_rel = 1e-6;   // degeneracy threshold relative to curvature scale
};

/// Scans interior cells for simultaneous zero crossings of both partials,
/// polishes candidates by 2D Newton on the interpolant, deduplicates and
/// classifies via the physical Hessian. Points on a critical line of a
/// shear state come back flagged Degenerate.
std::vector<CriticalPoint> find_critical_points(const ScalarField& field,
                                                const FindOptions& opts = {});

struct StreamlineCurve {
  std::vector<double> x, y, dy;  // samples of y_eps(x) and its x-derivative
  double y0 = 0.0;
  double dist_inf = 0.0;  // ||y_eps - y0||_inf
  double dist_c1 = 0.0;   // max(dist_inf, ||y_eps'||_inf)
};

struct StreamlineOptions {
  double window_cap = 0.45;  // fraction of the gap to walls/other stagnation
};

/// Per-column root of the interpolated d_y psi inside the window around the
/// base stagnation height. Throws WindowExit when a column has no root.
StreamlineCurve singular_streamline(const ScalarField& field, const ShearProfile& profile,
                                    const StreamlineOptions& opts = {});

/// Marching squares on a refine-times finer sampling of the interpolant.
/// Saddle cells are split by the corner-average midpoint rule.
std::vector<Contour> trace_level_set(const ScalarField& field, double level, int refine = 1);

struct IslandLevel {
  double delta = 0.0;
  double level = 0.0;
  double height = 0.0;
  double width = 0.0;
  double c1 = 0.0, c2 = 0.0;  // bounds of ((y-y_c)^2 + eps (x-x_c)^2) / (delta eps)
  Contour contour;
};

struct IslandReport {
  CriticalPoint center;
  std::vector<IslandLevel> levels;
  double separatrix_level = 0.0;
  bool has_separatrix = false;
};

struct IslandOptions {
  int refine = 4;
  double window_cap = 0.45;
};

/// Probes the level family (1 - delta)(psi_center - psi0(y0)) + psi0(y0)
/// around every admissible extremum near the stagnation band. An empty
/// result is the no-island outcome.
std::vector<IslandReport> detect_islands(const ScalarField& field, const ShearProfile& profile,
                                         std::span<const double> deltas,
                                         const IslandOptions& opts = {});

struct HessianDiagnostic {
  double hyy = 0.0;
  double hxx_over_eps = 0.0;
  double hxy_over_eps = 0.0;
  double det_over_eps = 0.0;
};

/// Scaled Hessian data of a polished nondegenerate extremum.
HessianDiagnostic hessian_diagnostic(const ScalarField& field, const CriticalPoint& pt,
                                     double epsilon);

}  // namespace islandlab
