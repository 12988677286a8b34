#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "doctest.h"
#include "qtwist/config_io.hpp"
#include "qtwist/error.hpp"
#include "qtwist/lvalue.hpp"
#include "qtwist/weight.hpp"

using namespace qtwist;

namespace {

std::string data_file(const std::string& name) { return std::string(QTWIST_DATA_DIR) + "/curves/" + name; }

// G_r(x) straight from the integral, t = 1 + u.
double G_quad(int r, double x) {
  if (r == 0) return std::exp(-x);
  if (r == 1) return boost::math::expint(1, x);
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double u) { return std::pow(std::log1p(u), r - 1) * std::exp(-x * (1.0 + u)) / (1.0 + u); };
  double fact = 1;
  for (int i = 2; i < r; ++i) fact *= i;
  return integrator.integrate(f, 1e-14) / fact;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("weight functions against quadrature") {
  CHECK(weight_G(0, 0.0) == 1.0);
  CHECK(weight_G(1, 1.0) == doctest::Approx(0.2193839344).epsilon(1e-9));
  const double x = 1e-3, g = 0.57721566490153286;
  const double approx = 0.5 * std::pow(std::log(x) + g, 2) + std::numbers::pi * std::numbers::pi / 12.0;
  CHECK(std::abs(weight_G(2, x) - approx) < 0.01);
  CHECK(rel(weight_G(2, x), G_quad(2, x)) < 1e-10);

  for (int r = 0; r <= kMaxOrder; ++r)
    for (double x : {0.01, 0.1, 0.5, 1.0, 1.9, 2.1, 3.0, 3.99, 4.01, 7.5, 12.0, 25.0, 50.0}) {
      CAPTURE(r);
      CAPTURE(x);
      CHECK(rel(weight_G(r, x), G_quad(r, x)) < 1e-10);
    }
  CHECK_THROWS_AS(weight_G(-1, 1.0), DomainError);
  CHECK(expint_e1_cf(5.0) == doctest::Approx(boost::math::expint(1, 5.0)).epsilon(1e-13));
}

TEST_CASE("series and asymptotic branches meet") {
  const auto& p = weight_params();
  CHECK(p.gamma_laurent.size() >= 7);
  CHECK(gamma_laurent(-1) == doctest::Approx(1.0));
  CHECK(gamma_laurent(0) == doctest::Approx(-0.5772156649015329).epsilon(1e-15));
  for (int r = 1; r <= kMaxOrder; ++r) {
    const double x0 = r == 1 ? p.x0 : p.x0_higher;
    CAPTURE(r);
    CHECK(rel(weight_G_series(r, x0), weight_G_asymptotic(r, x0)) < 1e-10);
  }
}

TEST_CASE("weight tables") {
  for (int r = 0; r <= kMaxOrder; ++r) {
    const auto& t = weight_table(r);
    CHECK(t.order() == r);
    for (double x = 0.05; x < 70; x *= 1.07) {
      CAPTURE(r);
      CAPTURE(x);
      CHECK(rel(t(x), weight_G(r, x)) < 1e-12);
    }
  }
}

TEST_CASE("L(11a,1)") {
  const auto cfg = load_curve_config(data_file("11a.cfg"));
  const auto table = an_table(cfg, 100000);
  const auto v = l_derivative(table.view(), 11, 0, 1e-7);
  CHECK(v.error <= 1e-7);
  CHECK(v.conductor == 11);
  // Direct sum of 2 a_n/n exp(-2 pi n/sqrt 11) over the whole table.
  long double s = 0;
  for (std::size_t n = 1; n <= table.bound(); ++n)
    s += static_cast<long double>(table[n]) / n * std::exp(-2.0L * std::numbers::pi_v<long double> * n / std::sqrt(11.0L));
  CHECK(std::abs(v.value - static_cast<double>(2 * s)) < 1e-7);
  CHECK(v.value == doctest::Approx(0.2538419).epsilon(1e-6));

  CHECK_THROWS_AS(l_derivative(an_table(cfg, 5).view(), 11, 0, 1e-10), InsufficientTerms);
  for (std::size_t M = 10; M < 2000; M *= 2) CHECK(tail_bound(11 * 1000 * 1000, 1, M) > tail_bound(11 * 1000 * 1000, 1, 2 * M));
}

TEST_CASE("error bounds are honest") {
  const auto cfg = load_curve_config(data_file("11a.cfg"));
  std::vector<std::int64_t> ds;
  for (auto d : enumerate_fundamental(600))
    if (std::gcd(d, std::int64_t{22}) == 1) ds.push_back(d);
  std::mt19937_64 rng(23);
  std::shuffle(ds.begin(), ds.end(), rng);
  ds.resize(50);
  const auto table = an_table(cfg, 2 * terms_needed(11ull * 600 * 600, 1, 1e-4), {.provider = Provider::eta});
  for (auto d : ds) {
    const auto tw = make_twist(cfg, d);
    const int r = tw.parity == Parity::even ? 0 : 1;
    const auto chi = character_table(d, table.bound());
    const auto v = l_derivative(SeriesInput{table.view(), chi, tw.conductor}, r, 1e-4);
    // Twice as many terms, evaluated without the tables.
    const double h = 2.0 * std::numbers::pi / std::sqrt(static_cast<double>(tw.conductor));
    long double s = 0;
    for (std::size_t n = 1; n <= 2 * v.terms; ++n)
      s += static_cast<long double>(table[n] * chi[n]) / n * weight_G(r, n * h);
    CAPTURE(d);
    CHECK(std::abs(static_cast<double>(2 * s) - v.value) <= v.error);
  }
}

TEST_CASE("root numbers") {
  const auto cfg = load_curve_config(data_file("11a.cfg"));
  const auto table = an_table(cfg, sign_terms_needed(11ull * 4000 * 4000, 1e-6, 1 / 1.3));
  CHECK(infer_sign(SeriesInput{table.view(), {}, 11}) == 1);
  for (std::int64_t d : {-3, 5, -7, 13, -163, 1009, -2003, 3997}) {
    const auto tw = make_twist(cfg, d);
    const auto chi = character_table(d, table.bound());
    const SeriesInput in{table.view(), chi, tw.conductor};
    const int want = tw.parity == Parity::even ? 1 : -1;
    CAPTURE(d);
    for (auto deltas : {std::pair{1.05, 1.2}, std::pair{1.1, 1.3}, std::pair{1.2, 1.05}})
      CHECK(infer_sign_detail(in, 1e-6, deltas).sign == want);
  }
  // A wrong conductor fits neither sign.
  CHECK_THROWS_AS(infer_sign(SeriesInput{table.view(), {}, 13}), ConfigError);

  // The smallest-L' twist: sign -1 from the coefficients alone.
  const std::int64_t d = 477121;
  const auto tw = make_twist(cfg, d);
  const auto M = sign_terms_needed(tw.conductor, 1e-6, 1 / 1.3);
  const auto big = an_table(cfg, M, {.provider = Provider::eta});
  const auto chi = character_table(d, M);
  CHECK(infer_sign(SeriesInput{big.view(), chi, tw.conductor}) == -1);
}

TEST_CASE("rank classification") {
  const auto cfg = load_curve_config(data_file("11a.cfg"));
  const auto table = an_table(cfg, 400000, {.provider = Provider::eta});
  const auto base = classify_rank(SeriesInput{table.view(), {}, 11}, Parity::even);
  CHECK(base.order == 0);
  CHECK(base.resolved);
  CHECK(std::abs(base.value.value - 0.2538419) <= base.value.error + 1e-7);

  // The first odd twist with vanishing L' has rank 3.
  std::int64_t first = 0;
  for (auto d : enumerate_fundamental(5000)) {
    if (std::gcd(d, std::int64_t{22}) != 1 || twist_parity(cfg, d) != Parity::odd) continue;
    const auto tw = make_twist(cfg, d);
    const auto chi = character_table(d, table.bound());
    const auto v = l_derivative(SeriesInput{table.view(), chi, tw.conductor}, 1, 1e-5);
    if (std::abs(v.value) < 1e-3) {
      first = d;
      break;
    }
  }
  REQUIRE(first != 0);
  const auto tw = make_twist(cfg, first);
  const auto chi = character_table(first, table.bound());
  const auto est = classify_rank(SeriesInput{table.view(), chi, tw.conductor}, Parity::odd);
  CAPTURE(first);
  CHECK(est.order == 3);
  CHECK(est.lower.size() == 1);

  const auto big = load_curve_config(data_file("p1531408357.cfg"));
  std::size_t M3 = 0;
  for (int r : {1, 3}) M3 = std::max(M3, terms_needed(big.conductor, r, 1e-3));
  const auto t3 = an_table(big, M3);
  const auto r3 = classify_rank(SeriesInput{t3.view(), {}, big.conductor}, Parity::odd);
  CHECK(r3.order == 3);
  CHECK(r3.value.value == doctest::Approx(8.089).epsilon(1e-3));
  CHECK_THROWS_AS(classify_rank(SeriesInput{t3.view(), {}, big.conductor}, Parity::odd, 1e-2, 0), DomainError);
}
