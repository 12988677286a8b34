#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtwist/arith.hpp"

namespace qtwist {

enum class Kodaira { split, nonsplit, additive };

const char* to_string(Kodaira k);

/// Reduction data at one prime dividing the conductor.
struct LocalData {
  std::uint64_t p = 0;
  Kodaira kind = Kodaira::additive;
  int tamagawa = 1;
  int ord_delta = 0;
};

/// One factor eta(m tau)^e of an eta quotient.
struct EtaFactor {
  int scale = 1;
  int exponent = 1;
};

/// Product of eta(m_i tau)^{e_i}. The leading q-power is sum(m_i e_i)/24.
struct EtaQuotientSpec {
  std::vector<EtaFactor> factors;

  /// sum m_i e_i; a weight-2 newform with leading term q needs 24.
  int weighted_scale() const;
  int weight_twice() const;
};

/// Integer Weierstrass invariants of [a1,a2,a3,a4,a6].
struct Invariants {
  i128 b2, b4, b6, b8;
  i128 c4, c6;
  i128 discriminant;
};

/// A fixed rational elliptic curve with the arithmetic data the pipeline needs.
struct CurveConfig {
  std::string label;
  std::array<std::int64_t, 5> a{};  // a1, a2, a3, a4, a6
  std::uint64_t conductor = 1;
  int sign = 1;
  std::vector<LocalData> local;
  int torsion = 1;
  std::optional<double> omega;
  std::optional<double> omega_vol;
  std::optional<EtaQuotientSpec> eta;

  std::int64_t a1() const { return a[0]; }
  std::int64_t a2() const { return a[1]; }
  std::int64_t a3() const { return a[2]; }
  std::int64_t a4() const { return a[3]; }
  std::int64_t a6() const { return a[4]; }

  /// Local data at p, or nullptr when p does not divide the conductor.
  const LocalData* local_at(std::uint64_t p) const;
};

Invariants invariants(const std::array<std::int64_t, 5>& a);

/// Throws ConfigError when an invariant of CurveConfig is violated.
void validate(const CurveConfig& cfg);

/// Exact rational with a positive denominator, always reduced.
struct Rational {
  i128 num = 0;
  i128 den = 1;

  static Rational make(i128 num, i128 den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Residue modulo an odd prime not dividing den.
  std::uint64_t mod(std::uint64_t p) const;
  bool operator==(const Rational&) const = default;
};

/// y^2 = x^3 + A x + B obtained by completing the square and the cube
/// (x -> x - b2/12, y -> y - (a1 x + a3)/2); the invariant differential is preserved.
struct ShortModel {
  Rational A;
  Rational B;
  i128 c4 = 0;
  i128 c6 = 0;
  i128 discriminant = 0;
  std::array<std::int64_t, 5> source{};
};

/// Rejects singular models with ConfigError.
ShortModel to_short_form(const std::array<std::int64_t, 5>& a);
inline ShortModel to_short_form(const CurveConfig& cfg) { return to_short_form(cfg.a); }

}  // namespace qtwist
