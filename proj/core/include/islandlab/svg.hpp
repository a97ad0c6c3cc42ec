#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "islandlab/topology.hpp"

namespace islandlab {

/// Deterministic streamline plot: boundary curves, one layer per level,
/// islands filled, critical points marked by class. The viewport mapping is
/// stated in the file header comment.
void emit_svg(std::ostream& out, const ScalarField& field, std::span<const Contour> contours,
              std::span<const IslandReport> islands, std::span<const CriticalPoint> points);

/// Convenience: traces 20 default levels and writes the plot to a file.
void write_svg_plot(const std::string& path, const ScalarField& field,
                    std::span<const IslandReport> islands, std::span<const CriticalPoint> points,
                    int levels = 20, int refine = 2);

/// CSV polylines: contour_id, closed, winding, x, y (one vertex per row).
void write_contours_csv(std::ostream& out, std::span<const Contour> contours);

}  // namespace islandlab
