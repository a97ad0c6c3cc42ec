#pragma once

#include <vector>

namespace islandlab {

/// Truncated real Fourier series on the circle,
///   f(x) = sum_{k=0..K} a_k cos(k x) + b_k sin(k x)   (b_0 is ignored).
class FourierSeries {
 public:
  FourierSeries() = default;

  static FourierSeries constant(double c);
  static FourierSeries cosine(int mode, double amplitude);
  static FourierSeries sine(int mode, double amplitude);

  void set_mode(int k, double cos_coef, double sin_coef);
  void add_mode(int k, double cos_coef, double sin_coef);

  double value(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;

  int max_mode() const { return static_cast<int>(cos_.size()) - 1; }
  double cos_coef(int k) const;
  double sin_coef(int k) const;

  /// Largest |coefficient| over all modes.
  double max_abs_coef() const;
  /// sum |a_k| + |b_k|, an upper bound for sup |f|.
  double sup_bound() const;
  /// True if some mode k >= 1 has a coefficient above tol_rel * max_abs_coef().
  bool has_nonconstant_mode(double tol_rel) const;
  bool all_finite() const;

  FourierSeries& operator+=(const FourierSeries& other);
  FourierSeries& operator*=(double scale);
  friend FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
  friend FourierSeries operator*(FourierSeries a, double s) { return a *= s; }
  friend FourierSeries operator*(double s, FourierSeries a) { return a *= s; }

  /// f(x - shift): rotates every mode.
  FourierSeries translated(double shift) const;

 private:
  std::vector<double> cos_;  // index k
  std::vector<double> sin_;
};

}  // namespace islandlab
