#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qtwist/scan.hpp"

namespace qtwist {

struct DistributionPoint {
  double x = 0.0;
  double F = 0.0;
};

/// Empirical CDF of the nonzero values. Vanishing records are counted in
/// zero_count, unresolved ones in unresolved_count; neither enters F.
struct Distribution {
  std::vector<DistributionPoint> points;
  std::size_t sample_size = 0;
  std::size_t zero_count = 0;
  std::size_t unresolved_count = 0;
};

Distribution cumulative_distribution(std::span<const TwistRecord> records, bool normalise);
Distribution cumulative_distribution(std::vector<double> values);

struct FitResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t sample_size = 0;
  std::string window;
  double intercept = 0.0;
  /// fit_power_exponent only: the same fit restricted to the upper half of X.
  std::optional<double> upper_estimate;
  std::optional<double> upper_std_error;
};

/// Ordinary least squares y = a + b x; returns (a, b, se(b)).
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Fits count ~ c X^A ignoring log factors.
FitResult fit_power_exponent(std::span<const std::pair<double, double>> counts);

struct RatioRow {
  std::uint64_t p = 0;
  int ap = 0;
  std::size_t R = 0;  // vanishing d that are nonzero squares mod p
  std::size_t N = 0;  // vanishing d that are nonsquares mod p
  std::optional<double> E;
  double C = 0.0;
};

/// (p+1+a_p)/(p+1-a_p)
double residuosity_rho(std::uint64_t p, int ap);

/// One row per prime; primes[i] pairs with ap[i]. d divisible by p are ignored.
std::vector<RatioRow> residuosity_table(std::span<const std::int64_t> vanishing, std::span<const std::uint64_t> primes,
                                        std::span<const int> ap, double k = -1.5);

/// Slope of log E against log rho through the origin; rows with a_p = 0 or
/// without a positive E are left out.
FitResult fit_k(std::span<const RatioRow> rows);

/// Draws `count` integers whose square class mod each p is biased by
/// rho_p^(+-k/2), so that the residue/nonresidue ratio at p is rho_p^k.
std::vector<std::int64_t> plant_vanishing_set(std::span<const std::uint64_t> primes, std::span<const int> ap, double k,
                                              std::size_t count, std::uint64_t seed);

enum class RmtModel { snaith, miller_independent };
enum class Symmetry { so_even, so_odd };

struct RmtLaw {
  RmtModel model = RmtModel::snaith;
  Symmetry symmetry = Symmetry::so_even;
  int order = 0;
  double value_exponent = 0.0;
  double log_exponent = 0.0;
};

/// Prob[L^(r) <= x] ~ x^value_exponent |log x|^log_exponent as x -> 0.
RmtLaw rmt_law(RmtModel model, Symmetry symmetry, int r);

/// Lower-tail slope of log F(x) against log x over the smallest `fraction`
/// of the positive values. Standard error from a seeded bootstrap.
FitResult tail_slope(std::span<const double> values, double fraction = 0.1, std::uint64_t seed = 1,
                     int bootstrap = 200);
FitResult tail_slope(const Distribution& dist, double fraction = 0.1, std::uint64_t seed = 1, int bootstrap = 200);

}  // namespace qtwist
