#include "islandlab/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "islandlab/errors.hpp"

namespace islandlab {

namespace {

constexpr double kW = 900.0, kH = 520.0, kMargin = 36.0;

struct Viewport {
  double ymin, ymax;
  double sx(double x) const { return kMargin + (kW - 2.0 * kMargin) * x / kTwoPi; }
  double sy(double y) const {
    return kH - kMargin - (kH - 2.0 * kMargin) * (y - ymin) / (ymax - ymin);
  }
};

void polyline(std::ostream& out, const Viewport& vp, std::span<const double> xs,
              std::span<const double> ys, const char* style, bool close) {
  char buf[64];
  out << "<path d=\"";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%c%.3f %.3f", k == 0 ? 'M' : 'L', vp.sx(xs[k]),
                  vp.sy(ys[k]));
    out << buf;
  }
  if (close) out << "Z";
  out << "\" " << style << "/>\n";
}

}  // namespace

void emit_svg(std::ostream& out, const ScalarField& field, std::span<const Contour> contours,
              std::span<const IslandReport> islands, std::span<const CriticalPoint> points) {
  const BoundaryShape& shape = field.grid().shape();
  const int nb = 256;
  std::vector<double> bx(nb + 1), btop(nb + 1), bbot(nb + 1);
  double ymin = 1e300, ymax = -1e300;
  for (int i = 0; i <= nb; ++i) {
    bx[i] = kTwoPi * i / nb;
    btop[i] = shape.top(bx[i]);
    bbot[i] = shape.bottom(bx[i]);
    ymin = std::min(ymin, bbot[i]);
    ymax = std::max(ymax, btop[i]);
  }
  const double pad = 0.05 * (ymax - ymin);
  const Viewport vp{ymin - pad, ymax + pad};

  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  std::snprintf(buf, sizeof(buf),
                "<!-- viewport: x in [0,%.6f] -> [%.1f,%.1f]; y in [%.6f,%.6f] -> [%.1f,%.1f] -->\n",
                kTwoPi, kMargin, kW - kMargin, vp.ymin, vp.ymax, kH - kMargin, kMargin);
  out << buf;
  out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<clipPath id=\"domain\"><rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" "
                "height=\"%.1f\"/></clipPath>\n",
                kMargin, kMargin, kW - 2 * kMargin, kH - 2 * kMargin);
  out << buf;
  out << "<g clip-path=\"url(#domain)\">\n";

  for (const Contour& c : contours) {
    polyline(out, vp, c.x, c.y,
             c.contractible() ? "stroke=\"#c0392b\" fill=\"none\" stroke-width=\"0.8\""
                              : "stroke=\"#5b7fa6\" fill=\"none\" stroke-width=\"0.8\"",
             false);
  }
  for (const IslandReport& island : islands) {
    if (island.levels.empty()) continue;
    const Contour& c = island.levels.back().contour;
    polyline(out, vp, c.x, c.y,
             "stroke=\"#c0392b\" fill=\"#e74c3c\" fill-opacity=\"0.35\" stroke-width=\"1.2\"",
             true);
  }
  for (const CriticalPoint& p : points) {
    const double cx = vp.sx(p.x), cy = vp.sy(p.y);
    switch (p.kind) {
      case CriticalKind::Maximum:
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"#c0392b\"/>\n", cx, cy);
        break;
      case CriticalKind::Minimum:
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"white\" "
                      "stroke=\"#2980b9\" stroke-width=\"1.5\"/>\n",
                      cx, cy);
        break;
      case CriticalKind::Saddle:
        std::snprintf(buf, sizeof(buf),
                      "<path d=\"M%.3f %.3fL%.3f %.3fM%.3f %.3fL%.3f %.3f\" stroke=\"#27603f\" "
                      "stroke-width=\"1.5\"/>\n",
                      cx - 4, cy - 4, cx + 4, cy + 4, cx - 4, cy + 4, cx + 4, cy - 4);
        break;
      case CriticalKind::Degenerate:
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.3f\" y=\"%.3f\" width=\"5\" height=\"5\" fill=\"#888888\"/>\n",
                      cx - 2.5, cy - 2.5);
        break;
    }
    out << buf;
  }
  out << "</g>\n";
  // walls drawn over the clip group
  polyline(out, vp, bx, btop, "stroke=\"black\" fill=\"none\" stroke-width=\"1.6\"", false);
  polyline(out, vp, bx, bbot, "stroke=\"black\" fill=\"none\" stroke-width=\"1.6\"", false);
  out << "</svg>\n";
  if (!out) throw IoError("emit_svg: stream failure");
}

void write_contours_csv(std::ostream& out, std::span<const Contour> contours) {
  out << "contour_id,closed,winding,x,y\n";
  char buf[96];
  for (std::size_t c = 0; c < contours.size(); ++c) {
    for (std::size_t k = 0; k < contours[c].x.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%.17g,%.17g\n", c, contours[c].closed ? 1 : 0,
                    contours[c].winding, contours[c].x[k], contours[c].y[k]);
      out << buf;
    }
  }
  if (!out) throw IoError("write_contours_csv: stream failure");
}

void write_svg_plot(const std::string& path, const ScalarField& field,
                    std::span<const IslandReport> islands, std::span<const CriticalPoint> points,
                    int levels, int refine) {
  const double lo = field.min(), hi = field.max();
  std::vector<Contour> contours;
  for (int k = 1; k <= levels; ++k) {
    const double level = lo + (hi - lo) * k / (levels + 1);
    if (!(level > lo && level < hi)) continue;
    for (Contour& c : trace_level_set(field, level, refine)) {
      contours.push_back(std::move(c));
    }
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path);
  emit_svg(out, field, contours, islands, points);
}

}  // namespace islandlab
