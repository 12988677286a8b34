#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace qtwist {

/// Class number of Q(sqrt d) for a negative fundamental discriminant, by
/// counting reduced forms (a,b,c) with |b| <= a <= c and b >= 0 on the boundary.
std::uint64_t class_number(std::int64_t d);

struct HeegnerParams {
  std::uint64_t h = 1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

/// Squared length of a sum of h independent uniform unit vectors in R^h.
struct HeegnerStats {
  std::uint64_t h = 0;
  std::uint64_t trials = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance of the squared length
  double std_error = 0.0; // of the mean
};

HeegnerStats heegner_sum_model(const HeegnerParams& params);

/// sqrt|d| L(E,1) L'(E_d,1) / (4 Omega_vol). When a conductor is given, d must
/// be a square mod 4N.
double gross_zagier_height(std::int64_t d, double omega_vol, double L1, double L1p,
                           std::optional<std::uint64_t> conductor = std::nullopt);

enum class Quadrants { all, positive };

/// Tuples (d,u,v,w) with d w^2 = v(u^3 + A u v^2 + B v^3). Ranges are
/// inclusive and apply to |u|, |v| and |d|.
struct GranvilleBox {
  std::int64_t A = 0;
  std::int64_t B = 0;
  std::uint64_t dmin = 1, dmax = 1;
  std::uint64_t xmin = 1, xmax = 1;
  Quadrants quadrants = Quadrants::all;
  bool fundamental_only = false;
  std::uint64_t budget = 100'000'000;  // (u,v) pairs
};

/// Splits n = s * w^2 with s squarefree (sign kept on s). n != 0.
std::int64_t squarefree_part(std::int64_t n);

std::uint64_t granville_count(const GranvilleBox& box);

enum class PredictionScheme { even_rank2, theta, granville };

PredictionScheme parse_prediction_scheme(const std::string& s);

/// X^(3/4), X^(1 - 3 theta/2) or X^(1/2 + 1/(2r)); constants and logs omitted.
double rank_count_prediction(double X, PredictionScheme scheme, double theta = 1.0 / 6.0, int r = 3);

}  // namespace qtwist
