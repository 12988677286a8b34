#include "qtwist/lvalue.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qtwist/error.hpp"
#include "qtwist/weight.hpp"

namespace qtwist {

namespace {

constexpr std::size_t kSmallDivisorRange = 1260;
// Relative accuracy of one weight evaluation plus the product rounding.
constexpr double kTermRounding = 1e-13;

double step(std::uint64_t N) { return 2.0 * std::numbers::pi / std::sqrt(static_cast<double>(N)); }

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0, comp = 0.0, abs = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    abs += std::abs(v);
  }
  double value() const { return sum + comp; }
};

// e^(-n h) for n = 1, 2, ... by repeated multiplication, resynchronised
// every 64 steps so the relative drift stays near machine precision.
class ExpWalk {
 public:
  explicit ExpWalk(double h) : h_(h), q_(std::exp(-h)), cur_(1.0) {}
  double next() {
    ++n_;
    cur_ = (n_ % 64 == 0) ? std::exp(-h_ * static_cast<double>(n_)) : cur_ * q_;
    return cur_;
  }

 private:
  double h_, q_, cur_;
  std::size_t n_ = 0;
};

void check_input(const SeriesInput& in) {
  if (in.conductor < 1) throw DomainError("conductor must be positive");
  if (in.a.size() < 2) throw DomainError("coefficient table is empty");
}

}  // namespace

std::size_t SeriesInput::available() const {
  const std::size_t n = a.size() - 1;
  return chi.empty() ? n : std::min(n, chi.size() - 1);
}

double tail_bound(std::uint64_t N, int r, std::size_t M) {
  const double h = step(N);
  const double c = M >= kSmallDivisorRange ? 1.0 : std::sqrt(3.0);
  return 2.0 * c * weight_G(r, static_cast<double>(M + 1) * h) / (1.0 - std::exp(-h));
}

std::size_t terms_heuristic(std::uint64_t N, int r, double target_err) {
  const double lnN = std::log(static_cast<double>(std::max<std::uint64_t>(N, 3)));
  const double m = std::sqrt(static_cast<double>(N)) / (2.0 * std::numbers::pi) *
                   (std::log(1.0 / target_err) + r * std::log(std::max(lnN, 1.0)) + 3.0);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(m)));
}

std::size_t terms_needed(std::uint64_t N, int r, double target_err) {
  if (!(target_err > 0)) throw DomainError("target error must be positive");
  if (r < 0 || r > kMaxOrder) throw DomainError("derivative order out of range");
  // Half the budget goes to the tail, the rest covers rounding.
  target_err *= 0.5;
  std::size_t hi = terms_heuristic(N, r, target_err);
  while (tail_bound(N, r, hi) > target_err) hi *= 2;
  std::size_t lo = 0;  // tail(lo) > target or lo == 0
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (tail_bound(N, r, mid) > target_err) lo = mid;
    else hi = mid;
  }
  return hi;
}

LValue l_derivative(const SeriesInput& in, int r, double target_err) {
  check_input(in);
  const std::size_t M = terms_needed(in.conductor, r, target_err);
  if (M > in.available())
    throw InsufficientTerms("L-series needs " + std::to_string(M) + " coefficients but only " +
                                std::to_string(in.available()) + " are available",
                            M);
  const WeightTable& G = weight_table(r);
  const double h = step(in.conductor);
  ExpWalk decay(h);
  Accumulator acc;
  for (std::size_t n = 1; n <= M; ++n) {
    const double e = decay.next();
    const int c = in.coeff(n);
    if (c == 0) continue;
    const double x = static_cast<double>(n) * h;
    acc.add(static_cast<double>(c) / static_cast<double>(n) * G.scaled(x) * e);
  }
  LValue out;
  out.order = r;
  out.value = 2.0 * acc.value();
  out.error = tail_bound(in.conductor, r, M) + 2.0 * kTermRounding * acc.abs;
  out.terms = M;
  out.conductor = in.conductor;
  return out;
}

LValue l_derivative(std::span<const std::int32_t> a, std::uint64_t N, int r, double target_err) {
  return l_derivative(SeriesInput{a, {}, N}, r, target_err);
}

std::size_t sign_terms_needed(std::uint64_t N, double target, double delta_min) {
  const double A = step(N) * delta_min;
  // c e^(-A(M+1)) / (1 - e^-A) <= target with c = sqrt(3).
  const double need = std::log(std::sqrt(3.0) / (target * (1.0 - std::exp(-A)))) / A;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(need)));
}

SignInference infer_sign_detail(const SeriesInput& in, double target, std::pair<double, double> deltas) {
  check_input(in);
  if (!(target > 0)) throw DomainError("target error must be positive");
  const auto [d1, d2] = deltas;
  if (!(d1 > 1.0 && d2 > 1.0 && d1 != d2)) throw DomainError("sign inference needs two distinct deltas above 1");
  const std::array<double, 4> t{d1, 1.0 / d1, d2, 1.0 / d2};
  const double dmin = *std::min_element(t.begin(), t.end());
  const std::size_t M = sign_terms_needed(in.conductor, target, dmin);
  if (M > in.available())
    throw InsufficientTerms("sign inference needs " + std::to_string(M) + " coefficients but only " +
                                std::to_string(in.available()) + " are available",
                            M);
  const double h = step(in.conductor);
  std::array<ExpWalk, 4> walks{ExpWalk(h * t[0]), ExpWalk(h * t[1]), ExpWalk(h * t[2]), ExpWalk(h * t[3])};
  std::array<Accumulator, 4> f{};
  for (std::size_t n = 1; n <= M; ++n) {
    std::array<double, 4> e{};
    for (std::size_t k = 0; k < 4; ++k) e[k] = walks[k].next();
    const int c = in.coeff(n);
    if (c == 0) continue;
    const double w = static_cast<double>(c) / static_cast<double>(n);
    for (std::size_t k = 0; k < 4; ++k) f[k].add(w * e[k]);
  }
  const double f1 = f[0].value(), f1i = f[1].value(), f2 = f[2].value(), f2i = f[3].value();
  SignInference out;
  out.terms = M;
  out.residual_plus = std::abs((f1 + f1i) - (f2 + f2i));
  out.residual_minus = std::abs((f1 - f1i) - (f2 - f2i));
  const double noise = 10.0 * target;
  if (out.residual_plus < noise && out.residual_minus < noise)
    throw DomainError("root number is ambiguous at target " + std::to_string(target) +
                      "; tighten the target (longer table)");
  const double best = std::min(out.residual_plus, out.residual_minus);
  if (best > 100.0 * target + 1e-9)
    throw ConfigError("neither root number fits the functional equation; check the conductor");
  out.sign = out.residual_plus <= out.residual_minus ? 1 : -1;
  return out;
}

int infer_sign(const SeriesInput& in, double target) {
  // Twists of rank three or more keep both residuals small at moderate
  // targets; tighten while the table allows it.
  const std::pair<double, double> deltas{1.1, 1.3};
  for (int attempt = 0;; ++attempt) {
    try {
      return infer_sign_detail(in, target, deltas).sign;
    } catch (const DomainError&) {
      target *= 1e-2;
      if (attempt == 2 || target < 1e-13 || sign_terms_needed(in.conductor, target, 1 / deltas.second) > in.available())
        throw;
    }
  }
}

RankEstimate classify_rank(const SeriesInput& in, Parity parity, double threshold, int max_order) {
  if (!(threshold > 0)) throw DomainError("rank threshold must be positive");
  max_order = std::min(max_order, kMaxOrder);
  const int first = parity == Parity::even ? 0 : 1;
  if (max_order < first) throw DomainError("max_order is below the lowest order allowed by the parity");
  RankEstimate out;
  for (int r = first; r <= max_order; r += 2) {
    const LValue v = l_derivative(in, r, threshold / 10.0);
    out.order = r;
    out.value = v;
    if (std::abs(v.value) > threshold) return out;
    out.lower.push_back(v);
  }
  out.lower.pop_back();
  out.resolved = false;
  return out;
}

}  // namespace qtwist
