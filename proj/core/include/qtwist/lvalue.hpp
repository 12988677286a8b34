#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qtwist/twist.hpp"

namespace qtwist {

/// L^(r)(E,1)/r! together with a certified error bound.
struct LValue {
  int order = 0;
  double value = 0.0;
  double error = 0.0;
  std::size_t terms = 0;
  std::uint64_t conductor = 0;
};

/// Coefficients a_n (index 0 unused) and an optional character chi(n) that
/// multiplies them; an empty character means the trivial one.
struct SeriesInput {
  std::span<const std::int32_t> a;
  std::span<const std::int8_t> chi;
  std::uint64_t conductor = 0;

  std::size_t available() const;
  int coeff(std::size_t n) const { return chi.empty() ? a[n] : a[n] * chi[n]; }
};

/// Bound on 2 sum_{n>M} |a_n|/n G_r(2 pi n / sqrt N) using |a_n| <= n for
/// n > 1260 and |a_n| <= sqrt(3) n below.
double tail_bound(std::uint64_t N, int r, std::size_t M);

/// First guess for the series length; terms_needed() certifies it.
std::size_t terms_heuristic(std::uint64_t N, int r, double target_err);
/// Series length l_derivative() uses for target_err: the smallest M whose
/// tail bound is at most target_err / 2.
std::size_t terms_needed(std::uint64_t N, int r, double target_err);

/// L^(r)(E,1)/r! = 2 sum a_n/n G_r(2 pi n/sqrt N). Only meaningful when the
/// sign is (-1)^r and all lower derivatives vanish. Throws InsufficientTerms
/// when the table is shorter than the tail bound demands.
LValue l_derivative(const SeriesInput& in, int r, double target_err);
LValue l_derivative(std::span<const std::int32_t> a, std::uint64_t N, int r, double target_err);

struct SignInference {
  int sign = 0;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  std::size_t terms = 0;
};

/// Root number from the delta-symmetry f(t) + eps f(1/t) = L(E,1), where
/// f(t) = sum a_n/n exp(-2 pi n t/sqrt N), compared at t = deltas.first and
/// deltas.second. Throws DomainError when both signs fit within 10*target and
/// ConfigError when neither does.
SignInference infer_sign_detail(const SeriesInput& in, double target = 1e-6,
                                std::pair<double, double> deltas = {1.1, 1.3});
/// infer_sign_detail() with the default deltas; an ambiguous answer is retried
/// at up to two 100x tighter targets when the series is long enough.
int infer_sign(const SeriesInput& in, double target = 1e-6);
std::size_t sign_terms_needed(std::uint64_t N, double target, double delta_min);

struct RankEstimate {
  int order = 0;
  bool resolved = true;  // false when every order up to max_order fell below threshold
  LValue value;
  std::vector<LValue> lower;  // the vanishing lower orders that were tried
};

/// Smallest r with the parity's sign and |L^(r)/r!| above `threshold`.
RankEstimate classify_rank(const SeriesInput& in, Parity parity, double threshold = 1e-2, int max_order = 5);

}  // namespace qtwist
