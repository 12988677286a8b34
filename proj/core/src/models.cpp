#include "qtwist/models.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "qtwist/arith.hpp"
#include "qtwist/error.hpp"
#include "qtwist/parallel.hpp"
#include "qtwist/twist.hpp"

namespace qtwist {

std::uint64_t class_number(std::int64_t d) {
  if (d >= 0 || !is_fundamental(d)) throw DomainError("class_number needs a negative fundamental discriminant");
  const std::int64_t D = -d;
  std::uint64_t h = 0;
  for (std::int64_t a = 1; 3 * a * a <= D; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (((b - d) & 1) != 0) continue;
      const std::int64_t num = b * b - d;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      ++h;
    }
  }
  return h;
}

HeegnerStats heegner_sum_model(const HeegnerParams& params) {
  if (params.h < 1) throw DomainError("Heegner model needs h >= 1");
  if (params.trials < 1) throw DomainError("Heegner model needs at least one trial");
  const std::size_t h = params.h;
  std::vector<double> sq(params.trials);
  const unsigned workers = params.workers ? params.workers : default_workers();
  parallel_for(params.trials, workers, 64, [&](std::size_t b, std::size_t e) {
    std::vector<double> sum(h), v(h);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t t = b; t < e; ++t) {
      // One stream per trial keeps results independent of the worker count.
      std::seed_seq ss{params.seed, static_cast<std::uint64_t>(t)};
      std::mt19937_64 rng(ss);
      std::fill(sum.begin(), sum.end(), 0.0);
      for (std::size_t k = 0; k < h; ++k) {
        double norm2 = 0.0;
        do {
          norm2 = 0.0;
          for (auto& x : v) {
            x = normal(rng);
            norm2 += x * x;
          }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < h; ++i) sum[i] += v[i] * inv;
      }
      double s = 0.0;
      for (double x : sum) s += x * x;
      sq[t] = s;
    }
  });
  HeegnerStats out;
  out.h = params.h;
  out.trials = params.trials;
  double mean = 0.0;
  for (double s : sq) mean += s;
  mean /= static_cast<double>(sq.size());
  double var = 0.0;
  for (double s : sq) var += (s - mean) * (s - mean);
  if (sq.size() > 1) var /= static_cast<double>(sq.size() - 1);
  out.mean = mean;
  out.variance = var;
  out.std_error = std::sqrt(var / static_cast<double>(sq.size()));
  return out;
}

double gross_zagier_height(std::int64_t d, double omega_vol, double L1, double L1p,
                           std::optional<std::uint64_t> conductor) {
  if (!(omega_vol > 0)) throw DomainError("Omega_vol must be positive");
  if (d >= 0 || !is_fundamental(d)) throw DomainError("Gross-Zagier needs a negative fundamental discriminant");
  if (conductor) {
    const auto m = static_cast<std::int64_t>(4 * *conductor);
    const std::int64_t r = ((d % m) + m) % m;
    bool square = false;
    for (std::int64_t b = 0; b < m && !square; ++b) square = (b * b) % m == r;
    if (!square) throw DomainError("d is not a square mod 4N; no Heegner point");
  }
  return std::sqrt(std::abs(static_cast<double>(d))) * L1 * L1p / (4.0 * omega_vol);
}

std::int64_t squarefree_part(std::int64_t n) {
  if (n == 0) throw DomainError("squarefree part of 0");
  std::int64_t s = n < 0 ? -1 : 1;
  std::uint64_t m = static_cast<std::uint64_t>(std::llabs(n));
  for (std::uint64_t p = 2; p * p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e % 2) s *= static_cast<std::int64_t>(p);
  }
  // What is left has at most two prime factors, so it is squarefree unless a square.
  const std::uint64_t r = isqrt(m);
  if (r * r != m) s *= static_cast<std::int64_t>(m);
  return s;
}

std::uint64_t granville_count(const GranvilleBox& box) {
  if (box.dmin < 1 || box.xmin < 1) throw DomainError("Granville box needs D >= 1 and X >= 1");
  if (box.xmax < box.xmin || box.dmax < box.dmin) return 0;
  const std::uint64_t side = (box.xmax - box.xmin + 1) * (box.quadrants == Quadrants::all ? 2 : 1);
  const std::uint64_t pairs = side * side;
  if (pairs > box.budget)
    throw BudgetError("Granville box has " + std::to_string(pairs) + " pairs, budget is " + std::to_string(box.budget),
                      pairs);
  const double bound = static_cast<double>(box.xmax);
  if (bound * (bound * bound * bound * (1.0 + std::abs(static_cast<double>(box.A)) + std::abs(static_cast<double>(box.B)))) > 9e18)
    throw DomainError("Granville box too large for 64-bit arithmetic");

  std::vector<std::int64_t> values;
  for (std::uint64_t x = box.xmin; x <= box.xmax; ++x) {
    values.push_back(static_cast<std::int64_t>(x));
    if (box.quadrants == Quadrants::all) values.push_back(-static_cast<std::int64_t>(x));
  }
  std::uint64_t count = 0;
  for (std::int64_t u : values) {
    for (std::int64_t v : values) {
      const std::int64_t R = v * (u * u * u + box.A * u * v * v + box.B * v * v * v);
      if (R == 0) continue;
      const std::int64_t d = squarefree_part(R);
      const auto ad = static_cast<std::uint64_t>(std::llabs(d));
      if (ad < box.dmin || ad > box.dmax) continue;
      if (box.fundamental_only && !is_fundamental(d)) continue;
      ++count;
    }
  }
  return count;
}

PredictionScheme parse_prediction_scheme(const std::string& s) {
  if (s == "even-rank2") return PredictionScheme::even_rank2;
  if (s == "theta") return PredictionScheme::theta;
  if (s == "granville" || s == "granville-r") return PredictionScheme::granville;
  throw DomainError("unknown prediction scheme '" + s + "' (even-rank2, theta, granville)");
}

double rank_count_prediction(double X, PredictionScheme scheme, double theta, int r) {
  if (!(X >= 1)) throw DomainError("prediction needs X >= 1");
  switch (scheme) {
    case PredictionScheme::even_rank2: return std::pow(X, 0.75);
    case PredictionScheme::theta:
      if (!(theta >= 0 && theta <= 0.5)) throw DomainError("theta must lie in [0, 1/2]");
      return std::pow(X, 1.0 - 1.5 * theta);
    case PredictionScheme::granville:
      if (r < 1) throw DomainError("granville scheme needs r >= 1");
      return std::pow(X, 0.5 + 0.5 / r);
  }
  return 0.0;
}

}  // namespace qtwist
