#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qtwist/curve.hpp"

namespace qtwist {

enum class Provider { point_count, eta, hybrid };

const char* to_string(Provider p);

/// Dirichlet coefficients a_1..a_M. Index 0 is stored as 0 so that
/// view()[n] == a_n.
class CoefficientTable {
 public:
  CoefficientTable(std::vector<std::int32_t> values, Provider provider);

  std::size_t bound() const noexcept { return values_.size() - 1; }
  std::int32_t operator[](std::size_t n) const { return values_[n]; }
  std::span<const std::int32_t> view() const noexcept { return values_; }
  Provider provider() const noexcept { return provider_; }

 private:
  std::vector<std::int32_t> values_;
  Provider provider_;
};

/// Trace of Frobenius at a prime of good reduction for the model. Odd p >= 5
/// use the quadratic-character sum over the short model; p = 2, 3 count
/// points on the original Weierstrass model.
std::int64_t ap_good(const ShortModel& model, std::uint64_t p);

/// Brute-force affine point count of the general model mod p (p small).
std::uint64_t count_points_general(const std::array<std::int64_t, 5>& a, std::uint64_t p);

/// +1 for split, -1 for nonsplit multiplicative reduction, read from local data.
int ap_bad_multiplicative(const CurveConfig& cfg, std::uint64_t p);

/// Reduction type at p read off the singular point of the model itself:
/// two F_p-rational tangent slopes -> split, none -> nonsplit, one -> additive.
/// Throws DomainError when the model is nonsingular mod p.
Kodaira reduction_type_by_slopes(const std::array<std::int64_t, 5>& a, std::uint64_t p);

struct AnTableOptions {
  Provider provider = Provider::point_count;
  /// Largest good prime the point counter will handle.
  std::uint64_t point_count_cap = 300000;
  /// Hybrid provider: good primes up to this bound are checked against point counts.
  std::uint64_t cross_check_bound = 10000;
  unsigned workers = 0;  // 0 -> default_workers()
};

CoefficientTable an_table(const CurveConfig& cfg, std::size_t bound, const AnTableOptions& opts = {});

/// a_p for every prime p <= bound from the point-count provider, indexed by p
/// (entries at composite indices are unspecified).
std::vector<std::int32_t> prime_traces(const CurveConfig& cfg, std::uint32_t bound, const AnTableOptions& opts = {});

/// Fills all a_n from prime values using multiplicativity and the Hecke
/// recurrence a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}} (good p) or
/// a_{p^k} = a_p^k (p | N).
std::vector<std::int32_t> fill_from_primes(std::span<const std::int32_t> ap, std::uint64_t conductor,
                                           std::size_t bound);

/// q-expansion of a weight-2 eta quotient, a_n = coefficient of q^n.
/// Each eta factor is expanded with the pentagonal number theorem and
/// multiplied in as a sparse series.
CoefficientTable eta_expansion(const EtaQuotientSpec& spec, std::size_t bound);

}  // namespace qtwist
