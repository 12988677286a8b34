#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qtwist/coefficients.hpp"
#include "qtwist/error.hpp"

namespace qtwist {

namespace {

struct Term {
  std::size_t shift;
  int coeff;
};

// Euler's product prod(1 - q^(m n)) up to q^(limit-1):
// sum over k of (-1)^k q^(m k(3k-1)/2), generalized pentagonal exponents.
std::vector<Term> pentagonal(std::size_t m, std::size_t limit) {
  std::vector<Term> out{{0, 1}};
  for (std::size_t k = 1;; ++k) {
    const std::size_t e1 = m * (k * (3 * k - 1) / 2);
    const std::size_t e2 = m * (k * (3 * k + 1) / 2);
    if (e1 >= limit) break;
    const int s = (k % 2) ? -1 : 1;
    out.push_back({e1, s});
    if (e2 < limit) out.push_back({e2, s});
  }
  return out;
}

// dense <- dense * sparse, in place. Blocks are written from the top down so
// every read below the current block still sees the old values.
void multiply_sparse(std::vector<std::int64_t>& dense, const std::vector<Term>& sparse) {
  constexpr std::size_t block = 1 << 14;
  const std::size_t n = dense.size();
  std::vector<std::int64_t> buf(block);
  std::size_t hi = n;
  while (hi > 0) {
    const std::size_t lo = hi > block ? hi - block : 0;
    std::fill(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(hi - lo), 0);
    for (const Term& t : sparse) {
      if (t.shift >= hi) break;
      const std::size_t from = std::max(lo, t.shift);
      const std::int64_t c = t.coeff;
      const std::int64_t* src = dense.data() + (from - t.shift);
      std::int64_t* dst = buf.data() + (from - lo);
      const std::size_t len = hi - from;
      for (std::size_t i = 0; i < len; ++i) dst[i] += c * src[i];
    }
    std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(hi - lo), dense.begin() + static_cast<std::ptrdiff_t>(lo));
    hi = lo;
  }
}

}  // namespace

CoefficientTable eta_expansion(const EtaQuotientSpec& spec, std::size_t bound) {
  if (bound < 1) throw DomainError("coefficient bound must be at least 1");
  if (spec.factors.empty()) throw DomainError("eta quotient has no factors");
  std::vector<std::size_t> scales;
  for (const auto& f : spec.factors) {
    if (f.scale < 1) throw DomainError("eta factor scale must be positive");
    if (f.exponent < 0) throw DomainError("eta quotients with negative exponents are not supported");
    if (f.exponent == 0) throw DomainError("eta factor exponent must be nonzero");
    for (int i = 0; i < f.exponent; ++i) scales.push_back(static_cast<std::size_t>(f.scale));
  }
  if (spec.weight_twice() != 4 || spec.weighted_scale() != 24)
    throw DomainError("eta quotient is not a weight-2 form with leading term q (need sum e = 4, sum m e = 24)");
  std::sort(scales.begin(), scales.end());

  // The quotient is q * prod_i prod_n (1 - q^(m_i n)); a_n is the coefficient
  // of q^(n-1) in the product.
  const std::size_t len = bound;
  std::vector<std::int64_t> dense(len, 0);
  {
    const auto s0 = pentagonal(scales[0], len);
    const auto s1 = pentagonal(scales[1], len);
    for (const Term& x : s0)
      for (const Term& y : s1) {
        const std::size_t e = x.shift + y.shift;
        if (e >= len) break;
        dense[e] += static_cast<std::int64_t>(x.coeff) * y.coeff;
      }
  }
  for (std::size_t i = 2; i < scales.size(); ++i) multiply_sparse(dense, pentagonal(scales[i], len));

  std::vector<std::int32_t> a(bound + 1, 0);
  for (std::size_t n = 1; n <= bound; ++n) {
    const std::int64_t v = dense[n - 1];
    if (v > std::numeric_limits<std::int32_t>::max() || v < std::numeric_limits<std::int32_t>::min())
      throw DomainError("eta coefficient a_" + std::to_string(n) + " overflows 32 bits");
    a[n] = static_cast<std::int32_t>(v);
  }
  return CoefficientTable(std::move(a), Provider::eta);
}

}  // namespace qtwist
