#pragma once

#include <vector>

#include "islandlab/fourier.hpp"
#include "islandlab/topology.hpp"

namespace islandlab {

/// Closed-form harmonic correction for the Couette base state: the unique
/// solution of Lap phi = 0 on the straight channel with phi(x, 1) = h(x),
/// phi(x, -1) = g(x). The n = 0 mode is the affine harmonic completion.
double couette_phi(const FourierSeries& h, const FourierSeries& g, double x, double y);
double couette_phi_dy(const FourierSeries& h, const FourierSeries& g, double x, double y);

/// Midline slope series sum_k k h_k / sinh(k), the rescaled-streamline limit
/// for perturbation pairs normalized by h_n + g_n = 0 (n != 0).
double couette_dyphi_mid(const FourierSeries& h, double x);

/// Two-point solve of phi'' = (k^2 + fprime(y)) phi, phi(-1) = 0, phi(1) = 1.
struct ModeProfile {
  std::vector<double> y, phi;
  double value(double yq) const;
};
ModeProfile mode_ode_solve(int k, const std::vector<double>& fprime_samples, int ny);

/// Exhaustive scan of the interpolant on a refine-times finer lattice;
/// 8-neighbour comparison, no Newton polish. The independent counterpart of
/// find_critical_points.
std::vector<CriticalPoint> brute_force_extrema(const ScalarField& field, int refine);

}  // namespace islandlab
