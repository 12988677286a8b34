#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qtwist/curve.hpp"

namespace qtwist {

/// A rational point given by decimal strings "p/q" or "p", so that
/// coordinates beyond 64 bits can be supplied.
struct PointInput {
  std::string x;
  std::string y;
};

struct HeightResult {
  std::string x, y;           // reduced coordinates of P
  double naive = 0.0;         // log max(|num x|, den x)
  double canonical = 0.0;     // h-hat(P); the x-coordinate normalisation (h-hat ~ h(x))
  double error = 0.0;
  int multiplier = 1;         // m with mP nonsingular mod every prime
  int torsion_order = 0;      // > 0 when P is torsion
};

/// Canonical height on the model a = [a1,a2,a3,a4,a6], assumed minimal.
/// Throws DomainError when P is not on the curve.
HeightResult canonical_height(const std::array<std::int64_t, 5>& a, const PointInput& P);

/// Integral-denominator points x = u/e^2 with |u| <= x_bound e^2 and e <= e_bound,
/// first `limit` found in order of e then |u|.
std::vector<PointInput> search_points(const std::array<std::int64_t, 5>& a, std::int64_t x_bound,
                                      std::int64_t e_bound, std::size_t limit = 8);

/// Coordinates of kP (k >= 1) as reduced fractions; throws when kP = O.
PointInput multiply_point(const std::array<std::int64_t, 5>& a, const PointInput& P, int k);
PointInput negate_point(const std::array<std::int64_t, 5>& a, const PointInput& P);

}  // namespace qtwist
