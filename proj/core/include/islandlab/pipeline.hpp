#pragma once

#include <optional>

#include "islandlab/expansion.hpp"
#include "islandlab/steady.hpp"
#include "islandlab/topology.hpp"

namespace islandlab {

/// Epsilon-independent stage of a perturbative study on the straight base
/// channel: shear state, principal eigenvalue, first-order correction.
struct CaseContext {
  BoundaryShape shape;
  Nonlinearity F;
  int nx = 0, ns = 0;
  std::shared_ptr<const MappedGrid> base_grid;
  ShearProfile profile;
  double lambda1 = 0.0;
  ScalarField psi0_base;
  ScalarField phi;
};

CaseContext prepare_case(const BoundaryShape& shape, const Nonlinearity& F, int nx, int ns);

struct RunOptions {
  std::vector<double> deltas = {0.05, 0.1, 0.2, 0.3};
  int refine = 4;
  bool run_fixed_point = false;
  int fp_max_iter = 60;
  SteadyOptions steady;
};

/// One epsilon of the solve -> expand -> topology pipeline.
struct EpsilonRun {
  double epsilon = 0.0;
  SteadyResult steady;
  ExpansionReport expansion;
  bool streamline_ok = false;
  StreamlineCurve streamline;
  std::string streamline_error;
  std::vector<IslandReport> islands;
  double max_height = 0.0;  // over islands and probed deltas
  bool hessian_ok = false;
  HessianDiagnostic hessian;
  bool fixed_point_ran = false;
  bool fixed_point_ok = false;
  FixedPointTrace fixed_point;
  double reconstruction_error = 0.0;  // || (u + eta) - r ||_inf
  std::string fixed_point_error;
};

EpsilonRun run_epsilon(const CaseContext& ctx, double epsilon, const RunOptions& opts = {});

}  // namespace islandlab
