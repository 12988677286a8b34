#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qtwist {

using i128 = __int128;

std::string to_decimal(i128 v);

bool is_squarefree(std::int64_t n);
std::uint64_t isqrt(std::uint64_t n);
/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);
/// Trial division plus primality testing; fine for |n| up to ~1e14.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);
/// Number of distinct integer roots of the monic cubic x^3 + a x^2 + b x + c.
int count_integer_cubic_roots(i128 a, i128 b, i128 c);

/// Smallest-prime-factor sieve. Immutable after construction.
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint32_t limit);

  std::uint32_t limit() const noexcept { return limit_; }
  std::uint32_t spf(std::uint32_t n) const { return spf_[n]; }
  bool is_prime(std::uint32_t n) const { return n >= 2 && spf_[n] == n; }
  std::span<const std::uint32_t> primes() const { return primes_; }

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

}  // namespace qtwist
