#include "qtwist/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qtwist/error.hpp"
#include "qtwist/twist.hpp"

namespace qtwist {

Distribution cumulative_distribution(std::vector<double> values) {
  Distribution out;
  std::sort(values.begin(), values.end());
  out.sample_size = values.size();
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;  // merge ties into one step
    out.points.push_back({values[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

Distribution cumulative_distribution(std::span<const TwistRecord> records, bool normalise) {
  if (records.empty()) throw DomainError("distribution of an empty record set");
  std::vector<double> values;
  std::size_t zeros = 0, unresolved = 0;
  for (const auto& r : records) {
    if (r.vanishing == Vanishing::yes) ++zeros;
    else if (r.vanishing == Vanishing::unresolved) ++unresolved;
    else if (!normalise) values.push_back(r.value);
    else values.push_back(r.value / std::pow(std::log(static_cast<double>(std::llabs(r.d))), r.order));
  }
  Distribution out = cumulative_distribution(std::move(values));
  out.zero_count = zeros;
  out.unresolved_count = unresolved;
  return out;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs two or more paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw DomainError("least squares: all abscissae are equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - f.intercept - f.slope * x[i];
      rss += e * e;
    }
    f.slope_se = std::sqrt(rss / (n - 2) / sxx);
  }
  return f;
}

FitResult fit_power_exponent(std::span<const std::pair<double, double>> counts) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [X, c] : counts)
    if (X > 0 && c > 0) pts.emplace_back(std::log(X), std::log(c));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first == b.first; }), pts.end());
  if (pts.size() < 3) throw DomainError("exponent fit needs at least three distinct X with positive counts");
  auto fit = [](std::span<const std::pair<double, double>> p) {
    std::vector<double> x, y;
    for (const auto& [a, b] : p) {
      x.push_back(a);
      y.push_back(b);
    }
    return least_squares(x, y);
  };
  const LinearFit all = fit(pts);
  FitResult out;
  out.estimate = all.slope;
  out.std_error = all.slope_se;
  out.intercept = all.intercept;
  out.sample_size = pts.size();
  out.window = "X in [" + std::to_string(std::exp(pts.front().first)) + ", " + std::to_string(std::exp(pts.back().first)) + "]";
  const std::size_t half = pts.size() / 2;
  if (pts.size() - half >= 2) {
    const LinearFit up = fit(std::span(pts).subspan(half));
    out.upper_estimate = up.slope;
    out.upper_std_error = up.slope_se;
  }
  return out;
}

double residuosity_rho(std::uint64_t p, int ap) {
  const double num = static_cast<double>(p) + 1.0 + ap;
  const double den = static_cast<double>(p) + 1.0 - ap;
  if (!(num > 0 && den > 0)) throw DomainError("a_p outside the Hasse range for p=" + std::to_string(p));
  return num / den;
}

std::vector<RatioRow> residuosity_table(std::span<const std::int64_t> vanishing, std::span<const std::uint64_t> primes,
                                        std::span<const int> ap, double k) {
  if (primes.size() != ap.size()) throw DomainError("residuosity: primes and a_p lists differ in length");
  if (vanishing.empty()) throw DomainError("residuosity: empty vanishing set");
  std::vector<RatioRow> rows;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    RatioRow row;
    row.p = primes[i];
    row.ap = ap[i];
    const auto P = static_cast<std::int64_t>(row.p);
    for (std::int64_t d : vanishing) {
      const int s = kronecker(d, P);
      if (s > 0) ++row.R;
      else if (s < 0) ++row.N;
    }
    if (row.N > 0) row.E = static_cast<double>(row.R) / static_cast<double>(row.N);
    row.C = std::pow(residuosity_rho(row.p, row.ap), k);
    rows.push_back(row);
  }
  return rows;
}

FitResult fit_k(std::span<const RatioRow> rows) {
  double sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> used;
  for (const auto& r : rows) {
    if (r.ap == 0 || !r.E || !(*r.E > 0)) continue;
    const double x = std::log(residuosity_rho(r.p, r.ap));
    const double y = std::log(*r.E);
    used.emplace_back(x, y);
    sxx += x * x;
    sxy += x * y;
  }
  if (used.size() < 2 || !(sxx > 0)) throw DomainError("k fit needs two or more rows with a_p != 0 and defined E");
  FitResult out;
  out.estimate = sxy / sxx;
  double rss = 0;
  for (const auto& [x, y] : used) rss += (y - out.estimate * x) * (y - out.estimate * x);
  out.std_error = std::sqrt(rss / static_cast<double>(used.size() - 1) / sxx);
  out.sample_size = used.size();
  out.window = std::to_string(used.size()) + " primes with a_p != 0";
  return out;
}

std::vector<std::int64_t> plant_vanishing_set(std::span<const std::uint64_t> primes, std::span<const int> ap, double k,
                                              std::size_t count, std::uint64_t seed) {
  if (primes.size() != ap.size()) throw DomainError("plant: primes and a_p lists differ in length");
  std::vector<double> w_res, w_non;
  double wmax = 1.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double rho = residuosity_rho(primes[i], ap[i]);
    w_res.push_back(std::pow(rho, k / 2));
    w_non.push_back(std::pow(rho, -k / 2));
    wmax *= std::max({w_res.back(), w_non.back(), 1.0});
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> draw(1, std::int64_t{1} << 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::int64_t> out;
  out.reserve(count);
  while (out.size() < count) {
    const std::int64_t d = draw(rng);
    double w = 1.0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const int s = kronecker(d, static_cast<std::int64_t>(primes[i]));
      w *= s > 0 ? w_res[i] : (s < 0 ? w_non[i] : 1.0);
    }
    if (unit(rng) * wmax < w) out.push_back(d);
  }
  return out;
}

RmtLaw rmt_law(RmtModel model, Symmetry symmetry, int r) {
  if (r < 0) throw DomainError("rmt_law: order must be nonnegative");
  RmtLaw law{model, symmetry, r, 0.0, 0.0};
  if (model == RmtModel::snaith) {
    law.value_exponent = r + 0.5;
    law.log_exponent = -0.5 * r * r + 0.5 * r + 0.375;
  } else {
    law.value_exponent = symmetry == Symmetry::so_even ? 0.5 : 1.5;
    law.log_exponent = 0.375;
  }
  return law;
}

namespace {

double tail_fit(const std::vector<double>& sorted, std::size_t m, double* intercept = nullptr) {
  const double n = static_cast<double>(sorted.size());
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = std::log(sorted[i]);
    y[i] = std::log((static_cast<double>(i) + 0.5) / n);
  }
  const LinearFit f = least_squares(x, y);
  if (intercept) *intercept = f.intercept;
  return f.slope;
}

}  // namespace

FitResult tail_slope(std::span<const double> values, double fraction, std::uint64_t seed, int bootstrap) {
  if (!(fraction > 0 && fraction <= 1)) throw DomainError("tail window fraction must lie in (0, 1]");
  std::vector<double> v;
  for (double x : values)
    if (x > 0) v.push_back(x);
  std::sort(v.begin(), v.end());
  const auto m = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(v.size())));
  if (m < 20) throw DomainError("tail slope needs at least 20 points in the window, have " + std::to_string(m));
  FitResult out;
  out.estimate = tail_fit(v, m, &out.intercept);
  out.sample_size = m;
  out.window = "lowest " + std::to_string(m) + " of " + std::to_string(v.size()) + " positive values";
  if (bootstrap > 1) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    std::vector<double> sample(v.size());
    double s = 0, s2 = 0;
    int done = 0;
    for (int b = 0; b < bootstrap; ++b) {
      for (auto& x : sample) x = v[pick(rng)];
      std::sort(sample.begin(), sample.end());
      double k;
      try {
        k = tail_fit(sample, m);
      } catch (const DomainError&) {
        continue;
      }
      s += k;
      s2 += k * k;
      ++done;
    }
    if (done > 1) {
      const double mean = s / done;
      out.std_error = std::sqrt(std::max(0.0, s2 / done - mean * mean));
    }
  }
  return out;
}

FitResult tail_slope(const Distribution& dist, double fraction, std::uint64_t seed, int bootstrap) {
  std::vector<double> values;
  double prev = 0.0;
  const double n = static_cast<double>(dist.sample_size);
  for (const auto& p : dist.points) {
    const auto k = static_cast<std::size_t>(std::llround((p.F - prev) * n));
    values.insert(values.end(), k, p.x);
    prev = p.F;
  }
  return tail_slope(values, fraction, seed, bootstrap);
}

}  // namespace qtwist
