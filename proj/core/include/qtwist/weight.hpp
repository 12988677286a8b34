#pragma once

#include <array>
#include <vector>

namespace qtwist {

/// Tuning for the weight functions G_r.
struct WeightFnParams {
  double gamma = 0.57721566490153286061;
  /// Laurent coefficients g_j of Gamma(s) at s = 0, j = -1 .. depth-2.
  std::vector<double> gamma_laurent;
  /// Below x0 the residue-plus-power-series form is used. Orders r >= 2
  /// switch earlier because the residue terms cancel harder.
  double x0 = 4.0;
  double x0_higher = 2.0;
  double rel_tol = 1e-13;
};

/// Largest derivative order the weight functions support.
inline constexpr int kMaxOrder = 5;

/// Parameters built once (thread-safe static initialisation).
const WeightFnParams& weight_params();

/// Laurent coefficients of Gamma at 0: gamma_laurent(j) multiplies s^j, j >= -1.
double gamma_laurent(int j);

/// G_r(x) = 1/(r-1)! int_1^inf (log t)^(r-1) e^(-x t) dt/t for r >= 1, G_0 = e^-x.
double weight_G(int r, double x);

/// The two evaluation branches, exposed so their agreement can be tested.
double weight_G_series(int r, double x);
double weight_G_asymptotic(int r, double x);

/// E_1(x) by the modified Lentz continued fraction (x > 0, best for x >~ 1).
double expint_e1_cf(double x);

/// Piecewise Chebyshev interpolant of G_r on (0, xmax] for the hot loops.
/// Below the first knot the series is evaluated directly.
class WeightTable {
 public:
  WeightTable(int r, double xmax = 80.0);

  int order() const noexcept { return r_; }
  double xmax() const noexcept { return xmax_; }

  /// G_r(x) * e^x, the smooth part; the caller supplies e^-x.
  double scaled(double x) const;
  double operator()(double x) const;

 private:
  static constexpr int kDegree = 16;
  static constexpr double kLow = 0.5;
  static constexpr double kWidth = 0.25;

  int r_;
  double xmax_;
  std::vector<std::array<double, kDegree + 1>> coeffs_;
};

/// Shared tables for r = 0 .. kMaxOrder.
const WeightTable& weight_table(int r);

}  // namespace qtwist
