#include "qtwist/coefficients.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qtwist/error.hpp"
#include "qtwist/parallel.hpp"

namespace qtwist {

namespace {

std::uint64_t reduce(std::int64_t v, std::uint64_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

bool divides(std::uint64_t p, i128 v) { return v % static_cast<i128>(p) == 0; }

/// -sum_x chi(x^3 + A x + B) with chi read from a table of squares mod p.
std::int64_t character_sum(std::uint64_t A, std::uint64_t B, std::uint64_t p, std::vector<std::int8_t>& chi) {
  chi.assign(p, -1);
  chi[0] = 0;
  std::uint64_t sq = 0;
  for (std::uint64_t x = 1; x <= (p - 1) / 2; ++x) {
    sq += 2 * x - 1;  // x^2 incrementally
    if (sq >= p) sq -= p;
    chi[sq] = 1;
  }
  // f(x) = x^3 + A x + B by forward differences: f, d1 = f(x+1)-f(x), d2 = 6x+6.
  std::uint64_t f = B % p;
  std::uint64_t d1 = (1 + A) % p;
  std::uint64_t d2 = 6 % p;
  std::int64_t sum = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    sum += chi[f];
    f += d1;
    if (f >= p) f -= p;
    d1 += d2;
    if (d1 >= p) d1 -= p;
    d2 += 6;
    if (d2 >= p) d2 -= p;
  }
  return -sum;
}

std::int64_t ap_good_impl(const ShortModel& model, std::uint64_t p, std::vector<std::int8_t>& chi) {
  if (p < 2) throw DomainError("ap_good: p must be prime");
  if (divides(p, model.discriminant))
    throw DomainError("ap_good: p=" + std::to_string(p) + " divides the discriminant; use the bad-prime rules");
  std::int64_t ap;
  if (p <= 3) {
    ap = static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(count_points_general(model.source, p) + 1);
  } else {
    ap = character_sum(model.A.mod(p), model.B.mod(p), p, chi);
  }
  if (static_cast<double>(ap) * static_cast<double>(ap) > 4.0 * static_cast<double>(p))
    throw DomainError("Hasse bound violated at p=" + std::to_string(p) + " (is p prime?)");
  return ap;
}

}  // namespace

const char* to_string(Provider p) {
  switch (p) {
    case Provider::point_count: return "point-count";
    case Provider::eta: return "eta";
    case Provider::hybrid: return "hybrid";
  }
  return "?";
}

CoefficientTable::CoefficientTable(std::vector<std::int32_t> values, Provider provider)
    : values_(std::move(values)), provider_(provider) {
  if (values_.size() < 2) throw DomainError("coefficient table needs at least a_1");
  values_[0] = 0;
}

std::uint64_t count_points_general(const std::array<std::int64_t, 5>& a, std::uint64_t p) {
  const std::uint64_t a1 = reduce(a[0], p), a2 = reduce(a[1], p), a3 = reduce(a[2], p), a4 = reduce(a[3], p),
                      a6 = reduce(a[4], p);
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t rhs = ((x * x % p * x) + a2 * x % p * x + a4 * x + a6) % p;
    for (std::uint64_t y = 0; y < p; ++y) {
      const std::uint64_t lhs = (y * y + a1 * x % p * y + a3 * y) % p;
      if (lhs == rhs) ++count;
    }
  }
  return count;
}

std::int64_t ap_good(const ShortModel& model, std::uint64_t p) {
  std::vector<std::int8_t> chi;
  return ap_good_impl(model, p, chi);
}

int ap_bad_multiplicative(const CurveConfig& cfg, std::uint64_t p) {
  const LocalData* l = cfg.local_at(p);
  if (!l) throw DomainError("ap_bad_multiplicative: p=" + std::to_string(p) + " does not divide the conductor");
  switch (l->kind) {
    case Kodaira::split: return 1;
    case Kodaira::nonsplit: return -1;
    case Kodaira::additive: break;
  }
  throw DomainError("ap_bad_multiplicative: additive reduction at p=" + std::to_string(p) + " (a_p = 0)");
}

Kodaira reduction_type_by_slopes(const std::array<std::int64_t, 5>& a, std::uint64_t p) {
  if (p > 10000000) throw DomainError("reduction_type_by_slopes: p too large for enumeration");
  const std::int64_t P = static_cast<std::int64_t>(p);
  auto md = [P](std::int64_t v) { return ((v % P) + P) % P; };
  const std::int64_t a1 = md(a[0]), a2 = md(a[1]), a3 = md(a[2]), a4 = md(a[3]), a6 = md(a[4]);
  for (std::int64_t x = 0; x < P; ++x) {
    for (std::int64_t y = 0; y < P; ++y) {
      // For odd p the singular point has F_y = 2y + a1 x + a3 = 0, so only one y to try.
      if (p != 2) {
        const std::int64_t half = (P + 1) / 2;
        y = md(md(-(a1 * x % P) - a3) * half);
      }
      const std::int64_t F = md(y * y % P + a1 * x % P * y + a3 * y - (x * x % P * x) - a2 * x % P * x - a4 * x - a6);
      const std::int64_t Fx = md(a1 * y - 3 * (x * x % P) - 2 * a2 * x - a4);
      const std::int64_t Fy = md(2 * y + a1 * x + a3);
      if (F == 0 && Fx == 0 && Fy == 0) {
        // Tangent cone: Y^2 + a1 X Y - (3 x0 + a2) X^2; count slopes m in F_p.
        const std::int64_t c = md(-(3 * x + a2));
        int roots = 0;
        for (std::int64_t m = 0; m < P; ++m) {
          if (md(m * m % P + a1 * m + c) == 0) ++roots;
        }
        if (roots == 2) return Kodaira::split;
        if (roots == 0) return Kodaira::nonsplit;
        return Kodaira::additive;
      }
      if (p != 2) break;
    }
  }
  throw DomainError("reduction_type_by_slopes: model is nonsingular mod " + std::to_string(p));
}

std::vector<std::int32_t> prime_traces(const CurveConfig& cfg, std::uint32_t bound, const AnTableOptions& opts) {
  const ShortModel model = to_short_form(cfg);
  PrimeSieve sieve(bound);
  const auto primes = sieve.primes();
  std::vector<std::int32_t> ap(static_cast<std::size_t>(bound) + 1, 0);

  for (std::uint32_t p : primes) {
    if (cfg.local_at(p)) continue;
    if (p > opts.point_count_cap)
      throw PartialTableError("point-count provider capped at p <= " + std::to_string(opts.point_count_cap) +
                                  "; first missing prime is " + std::to_string(p),
                              p);
    if (divides(p, model.discriminant))
      throw ConfigError("model of '" + cfg.label + "' is singular at the good prime " + std::to_string(p) +
                        "; supply a minimal model");
  }
  for (std::uint32_t p : primes) {
    if (const LocalData* l = cfg.local_at(p)) {
      ap[p] = l->kind == Kodaira::additive ? 0 : ap_bad_multiplicative(cfg, p);
    }
  }
  const unsigned workers = opts.workers ? opts.workers : default_workers();
  parallel_for(primes.size(), workers, 256, [&](std::size_t b, std::size_t e) {
    std::vector<std::int8_t> chi;
    for (std::size_t i = b; i < e; ++i) {
      const std::uint32_t p = primes[i];
      if (cfg.local_at(p)) continue;
      ap[p] = static_cast<std::int32_t>(ap_good_impl(model, p, chi));
    }
  });
  return ap;
}

std::vector<std::int32_t> fill_from_primes(std::span<const std::int32_t> ap, std::uint64_t conductor,
                                           std::size_t bound) {
  if (bound < 1) throw DomainError("coefficient bound must be at least 1");
  if (ap.size() < bound + 1) throw DomainError("fill_from_primes: prime values shorter than bound");
  PrimeSieve sieve(static_cast<std::uint32_t>(bound));
  std::vector<std::int32_t> a(bound + 1, 0);
  std::vector<std::uint32_t> ppow(bound + 1, 0);  // largest power of spf(n) dividing n
  a[1] = 1;
  for (std::size_t n = 2; n <= bound; ++n) {
    const std::uint32_t p = sieve.spf(static_cast<std::uint32_t>(n));
    const std::size_t m = n / p;
    ppow[n] = (m % p == 0) ? ppow[m] * p : p;
    if (ppow[n] == n) {
      if (m == 1) {
        a[n] = ap[p];
      } else if (conductor % p == 0) {
        a[n] = static_cast<std::int32_t>(static_cast<std::int64_t>(a[m]) * a[p]);
      } else {
        a[n] = static_cast<std::int32_t>(static_cast<std::int64_t>(a[p]) * a[m] -
                                         static_cast<std::int64_t>(p) * a[m / p]);
      }
    } else {
      a[n] = static_cast<std::int32_t>(static_cast<std::int64_t>(a[ppow[n]]) * a[n / ppow[n]]);
    }
  }
  return a;
}

CoefficientTable an_table(const CurveConfig& cfg, std::size_t bound, const AnTableOptions& opts) {
  if (bound < 1) throw DomainError("coefficient bound must be at least 1");
  if (bound > std::numeric_limits<std::uint32_t>::max() / 2) throw BudgetError("coefficient bound too large", bound);
  if (opts.provider == Provider::eta || opts.provider == Provider::hybrid) {
    if (!cfg.eta) throw ConfigError("curve '" + cfg.label + "' has no eta quotient; use the point-count provider");
    CoefficientTable t = eta_expansion(*cfg.eta, bound);
    if (opts.provider == Provider::eta) return t;
    const auto check = static_cast<std::uint32_t>(std::min<std::uint64_t>(bound, opts.cross_check_bound));
    if (check >= 2) {
      const auto ap = prime_traces(cfg, check, opts);
      PrimeSieve sieve(check);
      for (std::uint32_t p : sieve.primes()) {
        if (ap[p] != t[p])
          throw ConfigError("eta quotient of '" + cfg.label + "' disagrees with point counts at p=" +
                            std::to_string(p));
      }
    }
    auto values = std::vector<std::int32_t>(t.view().begin(), t.view().end());
    return CoefficientTable(std::move(values), Provider::hybrid);
  }
  const auto ap = prime_traces(cfg, static_cast<std::uint32_t>(bound), opts);
  return CoefficientTable(fill_from_primes(ap, cfg.conductor, bound), Provider::point_count);
}

}  // namespace qtwist
