#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "islandlab/geometry.hpp"
#include "islandlab/nonlinearity.hpp"

namespace islandlab {

enum class ExperimentKind { Solve, Expand, Sweep, Genericity, AppendixA, FixedPoint, Oracle };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
  BoundaryShape shape;
  Nonlinearity F = Nonlinearity::constant(-1.0);
  int nx = 128;
  int ns = 129;
  int refine = 4;
  std::vector<std::pair<int, int>> resolutions;  // for convergence studies
  std::vector<double> epsilons = {0.02};
  std::vector<double> deltas = {0.05, 0.1, 0.2, 0.3};
  int samples = 50;
  unsigned long long seed = 12345;
  ExperimentKind kind = ExperimentKind::Sweep;
  std::string appendix_case = "ctn-bottom";
  int fp_max_iter = 60;

  void validate() const;  // throws ConfigError
};

/// Sectioned key = value text:
///   [shape]        epsilon, c_bottom (c_G), c_top (c_H), and boundary lines
///                  G/H/g/h = mode cos_coef sin_coef (repeatable)
///   [nonlinearity] poly = c0 c1 ..., sin = amp omega phase (repeatable)
///   [grid]         nx, ns, refine, resolutions = 64x65 128x129 ...
///   [sweep]        kind, epsilons, deltas, samples, seed, case, max_iter
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace islandlab
