#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qtwist/curve.hpp"
#include "qtwist/height.hpp"

namespace qtwist {

/// Real roots of x^3 + A x + B in decreasing order (one or three).
std::vector<double> real_roots(double A, double B);

/// Integral of the Neron differential over E(R) for y^2 = x^3 + A x + B:
/// pi/AGM per component, two components when the discriminant is positive.
double real_period(double A, double B);
double real_period(const ShortModel& model);

/// Short model of E_d: y^2 = x^3 + A d^2 x + B d^3.
double twist_real_period(const CurveConfig& base, std::int64_t d);

/// 1 + number of rational roots of x^3 + A d^2 x + B d^3; odd torsion is
/// taken as trivial. |d| <= 8 is rejected.
int torsion_order_twist(const CurveConfig& base, std::int64_t d);

struct TamagawaResult {
  std::uint64_t product = 1;
  std::vector<std::pair<std::uint64_t, int>> local;  // (p, c_p)
  bool additive_from_config = false;                 // some factor copied from base data
};

/// g_d for gcd(d, 2N) = 1: I0* factors at p | d, toggled multiplicative
/// factors at p | N, additive factors copied from the configuration.
TamagawaResult tamagawa_twist(const CurveConfig& base, std::int64_t d);

/// Number of roots mod p of the 2-division polynomial 4x^3 + b2 x^2 + 2 b4 x + b6.
int two_division_roots_mod(const std::array<std::int64_t, 5>& a, std::uint64_t p);

struct BsdInvariants {
  std::int64_t d = 1;
  double omega = 0.0;
  std::uint64_t tamagawa = 1;
  int torsion = 1;
  double regulator = 1.0;
  double sha = 0.0;
  std::int64_t nearest_square = 0;
  double residual = 0.0;
  bool suspect_higher_rank = false;  // L-value below the vanishing threshold
};

/// Sha = L T^2 / (Omega g). Values with |L| <= zero_threshold give 0.
BsdInvariants sha_estimate_even(double L1, double omega, std::uint64_t g, int T, double zero_threshold = 1e-4);

/// Sha = L' T^2 / (Omega g h-hat). Rejects torsion generators.
BsdInvariants sha_estimate_odd(double L1p, double omega, std::uint64_t g, int T, const HeightResult& generator);

}  // namespace qtwist
