#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "islandlab/geometry.hpp"

namespace islandlab {

/// Real values sampled at the nodes of a MappedGrid, stored x-major:
/// index(i, j) = i * ns + j with i the periodic x index.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const MappedGrid> grid, double fill = 0.0);

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * ns_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * ns_ + j]; }

  int nx() const { return nx_; }
  int ns() const { return ns_; }
  bool empty() const { return data_.empty(); }
  const MappedGrid& grid() const { return *grid_; }
  const std::shared_ptr<const MappedGrid>& grid_ptr() const { return grid_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double min() const;
  double max() const;
  double max_abs() const;
  double max_abs_diff(const ScalarField& other) const;
  /// Largest |first difference quotient| over grid-neighbour pairs in
  /// physical coordinates; with max_abs() this is the discrete C^0 surrogate
  /// for Hoelder norms.
  double lipschitz_quotient() const;
  bool all_finite() const;

 private:
  std::shared_ptr<const MappedGrid> grid_;
  int nx_ = 0, ns_ = 0;
  std::vector<double> data_;
};

/// CSV rows: i, j, x, y, value (with header).
void write_csv(const ScalarField& f, std::ostream& out);
/// Little-endian block: uint32 nx, uint32 ns, then nx*ns doubles x-major.
void write_binary(const ScalarField& f, std::ostream& out);
/// Reads a block written by write_binary; throws IoError or GridMismatch if
/// the header does not match the grid.
ScalarField read_binary(std::istream& in, std::shared_ptr<const MappedGrid> grid);

}  // namespace islandlab
