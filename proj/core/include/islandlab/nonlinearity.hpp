#pragma once

#include <string>
#include <vector>

namespace islandlab {

/// Vorticity function F(t) = sum_k poly[k] t^k + sum_j amp_j sin(omega_j t + phase_j),
/// with exact first and second derivatives.
class Nonlinearity {
 public:
  Nonlinearity() = default;

  static Nonlinearity constant(double c);
  static Nonlinearity polynomial(std::vector<double> coeffs);

  void set_polynomial(std::vector<double> coeffs);
  void add_sin(double amplitude, double omega, double phase = 0.0);

  double f(double t) const;
  double df(double t) const;
  double d2f(double t) const;

  /// min of F' over a uniform sample of [lo, hi].
  double min_df(double lo, double hi, int samples = 1000) const;

  /// FD audit: F, F', F'' must agree with centered differences of each other
  /// to relative 1e-6 at random points of [lo, hi]. Throws Error on failure.
  void self_check(double lo = -3.0, double hi = 3.0, int points = 100,
                  unsigned long long seed = 0x5eedULL) const;

  std::string describe() const;

  const std::vector<double>& poly() const { return poly_; }
  struct SinTerm {
    double amplitude, omega, phase;
  };
  const std::vector<SinTerm>& sin_terms() const { return sins_; }

 private:
  std::vector<double> poly_;
  std::vector<SinTerm> sins_;
};

}  // namespace islandlab
