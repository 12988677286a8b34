#include "qtwist/bsd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "qtwist/error.hpp"
#include "qtwist/twist.hpp"

namespace qtwist {

namespace {

double agm(double a, double b) {
  for (int i = 0; i < 100; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    if (std::abs(a - b) <= 1e-16 * a) break;
  }
  return 0.5 * (a + b);
}

long double polish(long double A, long double B, long double x) {
  for (int i = 0; i < 4; ++i) {
    const long double f = (x * x + A) * x + B;
    const long double df = 3 * x * x + A;
    if (df == 0) break;
    x -= f / df;
  }
  return x;
}

}  // namespace

std::vector<double> real_roots(double A, double B) {
  const long double a = A, b = B;
  const long double disc = -4 * a * a * a - 27 * b * b;
  std::vector<double> out;
  if (disc > 0) {
    const long double m = 2 * std::sqrt(-a / 3);
    const long double arg = std::clamp(3 * b / (a * m), -1.0L, 1.0L);
    const long double th = std::acos(arg) / 3;
    for (int k = 0; k < 3; ++k) {
      const long double x = m * std::cos(th - 2 * std::numbers::pi_v<long double> * k / 3);
      out.push_back(static_cast<double>(polish(a, b, x)));
    }
  } else {
    const long double s = std::sqrt(std::max(0.0L, b * b / 4 + a * a * a / 27));
    const long double x = std::cbrt(-b / 2 + s) + std::cbrt(-b / 2 - s);
    out.push_back(static_cast<double>(polish(a, b, x)));
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double real_period(double A, double B) {
  if (-4 * A * A * A - 27 * B * B == 0) throw DomainError("real_period: singular cubic");
  const auto e = real_roots(A, B);
  if (e.size() == 3) {
    // Two real components, each of period pi/AGM.
    return 2.0 * std::numbers::pi / agm(std::sqrt(e[0] - e[2]), std::sqrt(e[0] - e[1]));
  }
  const double e1 = e[0];
  const double beta = std::sqrt(3 * e1 * e1 + A);
  return 2.0 * std::numbers::pi / agm(2.0 * std::sqrt(beta), std::sqrt(2.0 * beta + 3.0 * e1));
}

double real_period(const ShortModel& model) { return real_period(model.A.to_double(), model.B.to_double()); }

double twist_real_period(const CurveConfig& base, std::int64_t d) {
  if (d == 0) throw DomainError("twist by 0");
  const ShortModel m = to_short_form(base);
  const double dd = static_cast<double>(d);
  return real_period(m.A.to_double() * dd * dd, m.B.to_double() * dd * dd * dd);
}

int torsion_order_twist(const CurveConfig& base, std::int64_t d) {
  if (std::llabs(d) <= 8) throw DomainError("torsion of twists with |d| <= 8 is not handled; supply it in the configuration");
  const Invariants inv = invariants(base.a);
  // x -> X/36 makes x^3 + A d^2 x + B d^3 monic integral: X^3 - 27 c4 d^2 X - 54 c6 d^3.
  const i128 dd = d;
  return 1 + count_integer_cubic_roots(0, -27 * inv.c4 * dd * dd, -54 * inv.c6 * dd * dd * dd);
}

int two_division_roots_mod(const std::array<std::int64_t, 5>& a, std::uint64_t p) {
  if (p < 3 || p % 2 == 0) throw DomainError("two_division_roots_mod needs an odd prime");
  const Invariants inv = invariants(a);
  const i128 P = static_cast<i128>(p);
  auto md = [P](i128 v) { return ((v % P) + P) % P; };
  const i128 b2 = md(inv.b2), b4 = md(inv.b4), b6 = md(inv.b6);
  int roots = 0;
  for (i128 x = 0; x < P; ++x) {
    const i128 v = md(md(md(4 * x + b2) * x + 2 * b4) * x + b6);
    if (v == 0) ++roots;
  }
  return roots;
}

TamagawaResult tamagawa_twist(const CurveConfig& base, std::int64_t d) {
  twist_parity(base, d);  // validates d and gcd(d, 2N) = 1
  TamagawaResult out;
  if (d != 1) {
    for (const auto& [p, e] : factorize(static_cast<std::uint64_t>(std::llabs(d)))) {
      const int c = 1 + two_division_roots_mod(base.a, p);
      out.local.emplace_back(p, c);
      out.product *= static_cast<std::uint64_t>(c);
    }
  }
  for (const auto& l : base.local) {
    int c = l.tamagawa;
    if (l.kind == Kodaira::additive) {
      out.additive_from_config = true;
    } else {
      const bool stays = d == 1 || kronecker(d, static_cast<std::int64_t>(l.p)) == 1;
      const bool split = (l.kind == Kodaira::split) == stays;
      c = split ? l.ord_delta : (l.ord_delta % 2 == 0 ? 2 : 1);
    }
    out.local.emplace_back(l.p, c);
    out.product *= static_cast<std::uint64_t>(c);
  }
  std::sort(out.local.begin(), out.local.end());
  return out;
}

namespace {

void fill_square(BsdInvariants& b) {
  const auto s = static_cast<std::int64_t>(std::llround(std::sqrt(std::max(0.0, b.sha))));
  b.nearest_square = s * s;
  b.residual = std::abs(b.sha - static_cast<double>(b.nearest_square)) /
               std::max(1.0, static_cast<double>(b.nearest_square));
}

void check_ingredients(double omega, std::uint64_t g, int T) {
  if (!(omega > 0)) throw DomainError("real period must be positive");
  if (g < 1) throw DomainError("Tamagawa product must be at least 1");
  if (T < 1) throw DomainError("torsion order must be at least 1");
}

}  // namespace

BsdInvariants sha_estimate_even(double L1, double omega, std::uint64_t g, int T, double zero_threshold) {
  check_ingredients(omega, g, T);
  BsdInvariants b;
  b.omega = omega;
  b.tamagawa = g;
  b.torsion = T;
  b.regulator = 1.0;
  if (std::abs(L1) <= zero_threshold) {
    b.sha = 0.0;
    b.suspect_higher_rank = true;
  } else {
    b.sha = L1 * T * T / (omega * static_cast<double>(g));
  }
  fill_square(b);
  return b;
}

BsdInvariants sha_estimate_odd(double L1p, double omega, std::uint64_t g, int T, const HeightResult& generator) {
  check_ingredients(omega, g, T);
  if (generator.torsion_order > 0 || generator.canonical <= generator.error)
    throw DomainError("generator is torsion; its height cannot serve as a regulator");
  BsdInvariants b;
  b.omega = omega;
  b.tamagawa = g;
  b.torsion = T;
  b.regulator = generator.canonical;
  b.sha = L1p * T * T / (omega * static_cast<double>(g) * generator.canonical);
  fill_square(b);
  return b;
}

}  // namespace qtwist
