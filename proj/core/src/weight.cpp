#include "qtwist/weight.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "qtwist/error.hpp"

namespace qtwist {

namespace {

constexpr int kLaurentDepth = 12;

void check_order(int r) {
  if (r < 0) throw DomainError("weight function order must be nonnegative");
  if (r > kMaxOrder) throw DomainError("weight function order above " + std::to_string(kMaxOrder) + " is not supported");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// log Gamma(1+s) = -gamma s + sum_{k>=2} (-1)^k zeta(k) s^k / k, so
// Gamma(1+s) = exp(h(s)) and Gamma(s) = Gamma(1+s)/s. Kept in long double for
// the series branch, where the residue terms cancel.
const std::vector<long double>& laurent_ld() {
  static const std::vector<long double> g = [] {
    std::vector<long double> h(kLaurentDepth + 1, 0.0L), f(kLaurentDepth + 1, 0.0L);
    h[1] = -0.577215664901532860606512090082402431L;
    for (int k = 2; k <= kLaurentDepth; ++k)
      h[k] = ((k % 2) ? -1.0L : 1.0L) * std::riemann_zetal(static_cast<long double>(k)) / k;
    f[0] = 1.0L;
    for (int n = 1; n <= kLaurentDepth; ++n) {
      long double s = 0.0L;
      for (int k = 1; k <= n; ++k) s += k * h[k] * f[n - k];
      f[n] = s / n;
    }
    return f;
  }();
  return g;
}

WeightFnParams build_params() {
  WeightFnParams p;
  for (long double v : laurent_ld()) p.gamma_laurent.push_back(static_cast<double>(v));
  return p;
}

}  // namespace

const WeightFnParams& weight_params() {
  static const WeightFnParams params = build_params();
  return params;
}

double gamma_laurent(int j) {
  const auto& g = weight_params().gamma_laurent;
  if (j < -1 || j + 1 >= static_cast<int>(g.size())) throw DomainError("Gamma Laurent coefficient out of range");
  return g[static_cast<std::size_t>(j + 1)];
}

double expint_e1_cf(double x) {
  if (!(x > 0)) throw DomainError("E1 continued fraction needs x > 0");
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h * std::exp(-x);
  }
  throw DomainError("E1 continued fraction failed to converge");
}

double weight_G_series(int r, double x) {
  check_order(r);
  if (r == 0) return std::exp(-x);
  if (!(x > 0)) throw DomainError("G_r(x) needs x > 0 for r >= 1");
  const long double L = -std::log(static_cast<long double>(x));
  // Residue of Gamma(s) s^-r x^-s at s = 0.
  long double residue = 0.0L;
  for (int j = -1; j <= r - 1; ++j) {
    const int e = r - 1 - j;
    residue += laurent_ld()[static_cast<std::size_t>(j + 1)] * std::pow(L, e) / static_cast<long double>(factorial(e));
  }
  long double sum = 0.0L;
  long double pw = 1.0L;  // x^k / k!
  for (int k = 1; k < 1000; ++k) {
    pw *= static_cast<long double>(x) / k;
    const long double term = pw / std::pow(static_cast<long double>(k), r);
    sum += ((k - r) % 2 == 0) ? term : -term;
    if (k > x && term < 1e-21L * (std::abs(sum) + std::abs(residue))) break;
  }
  return static_cast<double>(residue + sum);
}

double weight_G_asymptotic(int r, double x) {
  check_order(r);
  if (r == 0) return std::exp(-x);
  if (!(x > 0)) throw DomainError("G_r(x) needs x > 0 for r >= 1");
  if (r == 1) return expint_e1_cf(x);
  // t = 1 + u/x turns the integral into e^-x/(r-1)! int_0^inf log(1+u/x)^(r-1) e^-u/(x+u) du.
  // e^-u drops below 1e-26 past u = 60, far under double resolution of the integral.
  auto integrand = [r, x](double u) { return std::pow(std::log1p(u / x), r - 1) * std::exp(-u) / (x + u); };
  double err = 0.0;
  const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 60.0, 12, 1e-14, &err);
  return std::exp(-x) * I / factorial(r - 1);
}

double weight_G(int r, double x) {
  check_order(r);
  if (r == 0) {
    if (x < 0) throw DomainError("G_0(x) needs x >= 0");
    return std::exp(-x);
  }
  const auto& p = weight_params();
  return x < (r == 1 ? p.x0 : p.x0_higher) ? weight_G_series(r, x) : weight_G_asymptotic(r, x);
}

WeightTable::WeightTable(int r, double xmax) : r_(r), xmax_(xmax) {
  check_order(r);
  if (!(xmax > kLow)) throw DomainError("WeightTable range too small");
  const auto intervals = static_cast<std::size_t>(std::ceil((xmax - kLow) / kWidth));
  xmax_ = kLow + static_cast<double>(intervals) * kWidth;
  coeffs_.resize(intervals);
  constexpr int n = kDegree + 1;
  std::array<double, n> f{};
  for (std::size_t i = 0; i < intervals; ++i) {
    const double mid = kLow + (static_cast<double>(i) + 0.5) * kWidth;
    for (int j = 0; j < n; ++j) {
      const double x = mid + 0.5 * kWidth * std::cos(std::numbers::pi * (j + 0.5) / n);
      f[static_cast<std::size_t>(j)] = weight_G(r, x) * std::exp(x);
    }
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += f[static_cast<std::size_t>(j)] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
      coeffs_[i][static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * s / n;
    }
  }
}

double WeightTable::scaled(double x) const {
  if (x < kLow || x >= xmax_) return weight_G(r_, x) * std::exp(x);
  const double pos = (x - kLow) / kWidth;
  const auto i = static_cast<std::size_t>(pos);
  const double t = 2.0 * (pos - static_cast<double>(i)) - 1.0;
  const auto& c = coeffs_[i];
  double b1 = 0.0, b2 = 0.0;
  for (int k = kDegree; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[static_cast<std::size_t>(k)];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

double WeightTable::operator()(double x) const { return scaled(x) * std::exp(-x); }

const WeightTable& weight_table(int r) {
  check_order(r);
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  static std::array<std::unique_ptr<WeightTable>, kMaxOrder + 1> tables;
  const auto i = static_cast<std::size_t>(r);
  std::call_once(flags[i], [&] { tables[i] = std::make_unique<WeightTable>(r); });
  return *tables[i];
}

}  // namespace qtwist
