#include "qtwist/twist.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "qtwist/error.hpp"

namespace qtwist {

const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  throw DomainError("parity must be 'even' or 'odd', got '" + s + "'");
}

SignFilter parse_sign_filter(const std::string& s) {
  if (s == "positive" || s == "+") return SignFilter::positive;
  if (s == "negative" || s == "-") return SignFilter::negative;
  if (s == "both") return SignFilter::both;
  throw DomainError("sign filter must be positive, negative or both, got '" + s + "'");
}

bool is_fundamental(std::int64_t d) {
  if (d == 0) return false;
  if (d == 1) return true;
  const std::int64_t r = ((d % 4) + 4) % 4;
  if (r == 1) return is_squarefree(d);
  if (r != 0) return false;
  const std::int64_t m = d / 4;
  const std::int64_t rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

std::vector<std::int64_t> enumerate_fundamental(std::uint64_t X, SignFilter signs) {
  std::vector<std::int64_t> out;
  if (X <= 2) return out;
  // Squarefree sieve on [1, X) so the enumeration stays linear.
  std::vector<bool> sqfree(X, true);
  for (std::uint64_t p = 2; p * p < X; ++p)
    for (std::uint64_t k = p * p; k < X; k += p * p) sqfree[k] = false;
  auto fundamental = [&](std::int64_t d) {
    const std::uint64_t a = static_cast<std::uint64_t>(std::llabs(d));
    const std::int64_t r = ((d % 4) + 4) % 4;
    if (r == 1) return static_cast<bool>(sqfree[a]);
    if (r != 0) return false;
    const std::int64_t m = d / 4;
    const std::int64_t rm = ((m % 4) + 4) % 4;
    return (rm == 2 || rm == 3) && sqfree[a / 4];
  };
  for (std::uint64_t a = 2; a < X; ++a) {
    const auto d = static_cast<std::int64_t>(a);
    if (signs != SignFilter::negative && fundamental(d)) out.push_back(d);
    if (signs != SignFilter::positive && fundamental(-d)) out.push_back(-d);
  }
  return out;
}

int kronecker(std::int64_t d, std::int64_t n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (d < 0) result = -result;
  }
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos > 0) {
    if (d % 2 == 0) return 0;
    const std::int64_t r8 = ((d % 8) + 8) % 8;
    if ((twos % 2) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol (d / n) with n odd and positive.
  std::int64_t a = d % n;
  if (a < 0) a += n;
  std::int64_t m = n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

Parity twist_parity(const CurveConfig& base, std::int64_t d) {
  if (!is_fundamental(d)) throw DomainError(std::to_string(d) + " is not a fundamental discriminant");
  if (d == 1) return base.sign > 0 ? Parity::even : Parity::odd;
  const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(std::llabs(d)), 2 * base.conductor);
  if (g != 1)
    throw UnsupportedDiscriminant("d=" + std::to_string(d) + " shares a factor with 2N; ramified twists are not supported", d);
  const int s = base.sign * kronecker(d, -static_cast<std::int64_t>(base.conductor));
  return s > 0 ? Parity::even : Parity::odd;
}

TwistSpec make_twist(const CurveConfig& base, std::int64_t d) {
  TwistSpec t;
  t.d = d;
  t.parity = twist_parity(base, d);
  const auto ad = static_cast<unsigned __int128>(std::llabs(d));
  const unsigned __int128 n = static_cast<unsigned __int128>(base.conductor) * ad * ad;
  if (n > std::numeric_limits<std::uint64_t>::max()) throw DomainError("twisted conductor overflows 64 bits");
  t.conductor = static_cast<std::uint64_t>(n);
  return t;
}

std::vector<std::int8_t> character_table(std::int64_t d, std::size_t M, const PrimeSieve& sieve) {
  if (sieve.limit() < M) throw DomainError("character_table: sieve shorter than M");
  std::vector<std::int8_t> chi(M + 1, 0);
  if (M >= 1) chi[1] = 1;
  for (std::size_t n = 2; n <= M; ++n) {
    const std::uint32_t p = sieve.spf(static_cast<std::uint32_t>(n));
    if (p == n) {
      chi[n] = static_cast<std::int8_t>(kronecker(d, static_cast<std::int64_t>(p)));
    } else {
      chi[n] = static_cast<std::int8_t>(chi[p] * chi[n / p]);
    }
  }
  return chi;
}

std::vector<std::int8_t> character_table(std::int64_t d, std::size_t M) {
  return character_table(d, M, PrimeSieve(static_cast<std::uint32_t>(M)));
}

CoefficientTable twisted_coefficients(const CoefficientTable& base, const TwistSpec& twist, std::size_t M) {
  if (base.bound() < M)
    throw InsufficientTerms("base table has " + std::to_string(base.bound()) + " terms, twist needs " +
                                std::to_string(M),
                            M);
  std::vector<std::int32_t> a(M + 1, 0);
  if (twist.d == 1) {
    for (std::size_t n = 1; n <= M; ++n) a[n] = base[n];
  } else {
    const auto chi = character_table(twist.d, M);
    for (std::size_t n = 1; n <= M; ++n) a[n] = base[n] * chi[n];
  }
  return CoefficientTable(std::move(a), base.provider());
}

}  // namespace qtwist
