#include "islandlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include "islandlab/errors.hpp"

namespace islandlab {

ScalarField::ScalarField(std::shared_ptr<const MappedGrid> grid, double fill)
    : grid_(std::move(grid)), nx_(grid_->nx()), ns_(grid_->ns()) {
  data_.assign(static_cast<std::size_t>(nx_) * ns_, fill);
}

double ScalarField::min() const {
  return *std::min_element(data_.begin(), data_.end());
}

double ScalarField::max() const {
  return *std::max_element(data_.begin(), data_.end());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::max_abs_diff(const ScalarField& other) const {
  double m = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) {
    m = std::max(m, std::abs(data_[k] - other.data_[k]));
  }
  return m;
}

double ScalarField::lipschitz_quotient() const {
  double m = 0.0;
  const MappedGrid& g = *grid_;
  for (int i = 0; i < nx_; ++i) {
    const int ip = g.wrap(i + 1);
    for (int j = 0; j < ns_; ++j) {
      {
        const double dxp = g.x(ip) - g.x(i);
        const double dx = (ip > i) ? dxp : dxp + kTwoPi;
        const double dy = g.y(ip, j) - g.y(i, j);
        const double dist = std::hypot(dx, dy);
        m = std::max(m, std::abs((*this)(ip, j) - (*this)(i, j)) / dist);
      }
      if (j + 1 < ns_) {
        const double dist = g.y(i, j + 1) - g.y(i, j);
        m = std::max(m, std::abs((*this)(i, j + 1) - (*this)(i, j)) / dist);
      }
    }
  }
  return m;
}

bool ScalarField::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void write_csv(const ScalarField& f, std::ostream& out) {
  out << "i,j,x,y,value\n";
  char buf[128];
  const MappedGrid& g = f.grid();
  for (int i = 0; i < f.nx(); ++i) {
    for (int j = 0; j < f.ns(); ++j) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", i, j, g.x(i), g.y(i, j),
                    f(i, j));
      out << buf;
    }
  }
}

void write_binary(const ScalarField& f, std::ostream& out) {
  const std::uint32_t nx = static_cast<std::uint32_t>(f.nx());
  const std::uint32_t ns = static_cast<std::uint32_t>(f.ns());
  out.write(reinterpret_cast<const char*>(&nx), sizeof(nx));
  out.write(reinterpret_cast<const char*>(&ns), sizeof(ns));
  out.write(reinterpret_cast<const char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(double)));
  if (!out) throw IoError("write_binary: stream failure");
}

ScalarField read_binary(std::istream& in, std::shared_ptr<const MappedGrid> grid) {
  std::uint32_t nx = 0, ns = 0;
  in.read(reinterpret_cast<char*>(&nx), sizeof(nx));
  in.read(reinterpret_cast<char*>(&ns), sizeof(ns));
  if (!in) throw IoError("read_binary: truncated header");
  if (static_cast<int>(nx) != grid->nx() || static_cast<int>(ns) != grid->ns()) {
    throw GridMismatch("read_binary: header does not match grid");
  }
  ScalarField f(std::move(grid));
  in.read(reinterpret_cast<char*>(f.data().data()),
          static_cast<std::streamsize>(f.data().size() * sizeof(double)));
  if (!in) throw IoError("read_binary: truncated payload");
  return f;
}

}  // namespace islandlab
