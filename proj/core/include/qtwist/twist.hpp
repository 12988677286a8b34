#pragma once

#include <cstdint>
#include <vector>

#include "qtwist/arith.hpp"
#include "qtwist/coefficients.hpp"
#include "qtwist/curve.hpp"

namespace qtwist {

enum class Parity { even, odd };
enum class SignFilter { positive, negative, both };

const char* to_string(Parity p);
Parity parse_parity(const std::string& s);
SignFilter parse_sign_filter(const std::string& s);

/// d = 1 counts as fundamental (the trivial character, i.e. the base curve).
bool is_fundamental(std::int64_t d);

/// All fundamental d with 1 < |d| < X, ordered by |d| with d > 0 first on ties.
std::vector<std::int64_t> enumerate_fundamental(std::uint64_t X, SignFilter signs = SignFilter::both);

/// Kronecker symbol (d/n), defined for all integers.
int kronecker(std::int64_t d, std::int64_t n);

struct TwistSpec {
  std::int64_t d = 1;
  Parity parity = Parity::even;
  std::uint64_t conductor = 1;  // N d^2
};

/// Sign of E_d: eps * (d / -N). Throws UnsupportedDiscriminant when
/// gcd(d, 2N) > 1 and DomainError when d is not fundamental.
Parity twist_parity(const CurveConfig& base, std::int64_t d);
TwistSpec make_twist(const CurveConfig& base, std::int64_t d);

/// chi_d(n) for 0 <= n <= M, filled multiplicatively from prime values.
std::vector<std::int8_t> character_table(std::int64_t d, std::size_t M, const PrimeSieve& sieve);
std::vector<std::int8_t> character_table(std::int64_t d, std::size_t M);

/// a_n(E_d) = a_n(E) chi_d(n) for n <= M.
CoefficientTable twisted_coefficients(const CoefficientTable& base, const TwistSpec& twist, std::size_t M);

}  // namespace qtwist
