#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qtwist/config_io.hpp"
#include "qtwist/csv.hpp"
#include "qtwist/error.hpp"
#include "qtwist/lvalue.hpp"
#include "qtwist/scan.hpp"
#include "qtwist/twist.hpp"

using namespace qtwist;

namespace {

std::string data_file(const std::string& name) { return std::string(QTWIST_DATA_DIR) + "/curves/" + name; }

// Legendre symbol by Euler's criterion, used as an oracle for odd prime n.
int euler(std::int64_t a, std::int64_t p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  std::int64_t r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

bool fundamental_oracle(std::int64_t d) {
  auto squarefree = [](std::int64_t m) {
    m = std::llabs(m);
    for (std::int64_t k = 2; k * k <= m; ++k)
      if (m % (k * k) == 0) return false;
    return true;
  };
  const std::int64_t r = ((d % 4) + 4) % 4;
  if (r == 1) return squarefree(d);
  if (r != 0) return false;
  const std::int64_t m = d / 4, rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && squarefree(m);
}

}  // namespace

TEST_CASE("fundamental discriminants") {
  CHECK(is_fundamental(-4));
  CHECK_FALSE(is_fundamental(4));
  CHECK(is_fundamental(12));
  CHECK_FALSE(is_fundamental(9));
  CHECK(is_fundamental(1));

  CHECK(enumerate_fundamental(21, SignFilter::positive) == std::vector<std::int64_t>{5, 8, 12, 13, 17});
  CHECK(enumerate_fundamental(21, SignFilter::negative) ==
        std::vector<std::int64_t>{-3, -4, -7, -8, -11, -15, -19, -20});
  CHECK(enumerate_fundamental(2).empty());

  const auto all = enumerate_fundamental(3000);
  std::size_t want = 0;
  for (std::int64_t d = -2999; d <= 2999; ++d)
    if (std::llabs(d) > 1 && fundamental_oracle(d)) ++want;
  CHECK(all.size() == want);
  for (std::size_t i = 1; i < all.size(); ++i) {
    const auto a = std::llabs(all[i - 1]), b = std::llabs(all[i]);
    CHECK((a < b || (a == b && all[i - 1] > 0)));
  }
  // Density of fundamental discriminants is 6/pi^2 per sign... summed over
  // both signs the count below X is about (6/pi^2) X.
  const double ratio = static_cast<double>(enumerate_fundamental(200000).size()) / 200000.0;
  CHECK(std::abs(ratio / (6.0 / (3.14159265358979 * 3.14159265358979)) - 1.0) < 0.05);
}

TEST_CASE("Kronecker symbol") {
  for (std::int64_t d : {-7, 1, 5, 12, -15, 1000003, -4}) CHECK(kronecker(d, 1) == 1);
  CHECK(kronecker(12, 5) == -1);
  CHECK(kronecker(-4, 7) == -1);
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(-7, 2) == 1);
  CHECK(kronecker(-3, -1) == -1);
  CHECK(kronecker(3, -1) == 1);
  CHECK(kronecker(6, 4) == 0);

  for (std::int64_t p : {3, 5, 7, 101, 997})
    for (std::int64_t a = -60; a <= 60; ++a) CHECK(kronecker(a, p) == euler(a, p));

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::int64_t> pick(-5000, 5000);
  for (int i = 0; i < 2000; ++i) {
    const auto d = pick(rng), m = pick(rng), n = pick(rng);
    CHECK(kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n));
  }
  for (std::int64_t d : {-23, 5, 8, -8, 12, -20, 21}) {
    const auto ad = std::llabs(d);
    for (std::int64_t n = 1; n < 200; ++n) CHECK(kronecker(d, n) == kronecker(d, n + ad));
  }
}

TEST_CASE("twist parity and coefficients") {
  const auto cfg = load_curve_config(data_file("11a.cfg"));
  CHECK(twist_parity(cfg, 477121) == Parity::odd);
  CHECK(make_twist(cfg, 477121).conductor == 11ull * 477121ull * 477121ull);
  CHECK_THROWS_AS(twist_parity(cfg, 8), UnsupportedDiscriminant);
  CHECK_THROWS_AS(twist_parity(cfg, -11), UnsupportedDiscriminant);
  CHECK_THROWS_AS(twist_parity(cfg, 9), DomainError);
  // eps = +1, so even iff (d / -11) = 1.
  for (auto d : enumerate_fundamental(400)) {
    if (std::gcd(d, std::int64_t{22}) != 1) continue;
    CHECK((twist_parity(cfg, d) == Parity::even) == (kronecker(d, -11) == 1));
  }

  const auto base = an_table(cfg, 200);
  const auto t12 = twisted_coefficients(base, make_twist(cfg, -3), 200);
  for (std::size_t n = 1; n <= 200; ++n) CHECK(t12[n] == base[n] * kronecker(-3, static_cast<std::int64_t>(n)));
  CHECK(t12[3] == 0);
  const auto id = twisted_coefficients(base, make_twist(cfg, 1), 50);
  for (std::size_t n = 1; n <= 50; ++n) CHECK(id[n] == base[n]);
  // a_5(E_12) = a_5 (12/5); 12 is not coprime to 2N but the character is fine.
  CHECK(base[5] * kronecker(12, 5) == -1);

  const auto chi = character_table(-23, 1000);
  for (std::int64_t n = 0; n <= 1000; ++n) CHECK(chi[n] == kronecker(-23, n));
}

TEST_CASE("parity agrees with numeric sign inference") {
  const auto cfg = load_curve_config(data_file("11a.cfg"));
  std::vector<std::int64_t> ds;
  for (auto d : enumerate_fundamental(1500))
    if (std::gcd(d, std::int64_t{22}) == 1) ds.push_back(d);
  std::mt19937_64 rng(17);
  std::shuffle(ds.begin(), ds.end(), rng);
  ds.resize(100);
  const auto M = sign_terms_needed(11ull * 1500 * 1500, 1e-6, 1 / 1.3);
  const auto table = an_table(cfg, M, {.provider = Provider::eta});
  for (auto d : ds) {
    const auto tw = make_twist(cfg, d);
    const auto chi = character_table(d, M);
    CHECK(infer_sign(SeriesInput{table.view(), chi, tw.conductor}) == (tw.parity == Parity::even ? 1 : -1));
  }
}

TEST_CASE("scan") {
  const auto cfg = load_curve_config(data_file("11a.cfg"));
  const std::uint64_t X = 2000;
  ScanPolicy policy;
  ScanPolicy strict;
  strict.coarse_eps = 1e-3;
  strict.refine_eps = 1e-5;
  const auto M2 = terms_needed(cfg.conductor * X * X, 2, 1e-5);
  const auto table = an_table(cfg, std::max(scan_terms_needed(cfg, X, strict), M2), {.provider = Provider::eta});

  CHECK(scan(cfg, table, 2, policy).records.empty());

  policy.workers = 1;
  const auto one = scan(cfg, table, X, policy);
  policy.workers = 3;
  const auto three = scan(cfg, table, X, policy);
  std::ostringstream a, b;
  write_scan_csv(a, one.records);
  write_scan_csv(b, three.records);
  CHECK(a.str() == b.str());

  // Every eligible d appears once, the rest are skipped.
  std::size_t eligible = 0;
  for (auto d : enumerate_fundamental(X))
    if (std::gcd(d, std::int64_t{22}) == 1) ++eligible;
  CHECK(one.records.size() == eligible);
  CHECK(one.records.size() + one.skipped.size() == enumerate_fundamental(X).size());
  CHECK(one.unresolved == 0);

  std::set<std::int64_t> v1, v2;
  const auto s = scan(cfg, table, X, strict);
  for (const auto& r : one.records) {
    CHECK(r.error >= 0);
    CHECK(r.order == (r.parity == Parity::odd ? 1 : 0));
    if (r.vanishing == Vanishing::yes) v1.insert(r.d);
    if (r.parity == Parity::even) CHECK(r.value >= -r.error);
  }
  for (const auto& r : s.records)
    if (r.vanishing == Vanishing::yes) v2.insert(r.d);
  CHECK(v1 == v2);
  CHECK_FALSE(v1.empty());

  // An even twist whose L vanishes should have positive L''/2!.
  for (const auto& r : one.records) {
    if (r.parity != Parity::even || r.vanishing != Vanishing::yes) continue;
    const auto tw = make_twist(cfg, r.d);
    const auto M = terms_needed(tw.conductor, 2, 1e-5);
    const auto chi = character_table(r.d, M);
    CHECK(l_derivative(SeriesInput{table.view().first(M + 1), chi, tw.conductor}, 2, 1e-5).value > 0);
  }

  // A table that is too short gives unresolved records, never missing ones.
  const auto shortt = an_table(cfg, 300, {.provider = Provider::eta});
  const auto partial = scan(cfg, shortt, X, ScanPolicy{});
  CHECK(partial.records.size() == one.records.size());
  CHECK(partial.unresolved > 0);
}

TEST_CASE("scan CSV round trip") {
  std::vector<TwistRecord> recs(3);
  recs[0] = {.d = -3, .parity = Parity::odd, .order = 1, .value = 1.23456789012, .error = 1e-7, .normalised = 1.1,
             .vanishing = Vanishing::no, .terms = 100};
  recs[1] = {.d = 5, .parity = Parity::even, .order = 0, .value = 0.0, .error = 1e-9, .normalised = 0.0,
             .vanishing = Vanishing::yes, .terms = 7};
  recs[2] = {.d = -7, .parity = Parity::odd, .order = 1, .value = 0.5, .error = 0.1, .normalised = 0.25,
             .vanishing = Vanishing::unresolved, .terms = 3};
  std::ostringstream os;
  write_scan_csv(os, recs, {"manifest: test"});
  const std::string text = os.str();
  CHECK(text.rfind("# manifest: test\nd,parity,r,value,error,normalised_value,vanishing,terms\n", 0) == 0);
  CHECK(text.find("-3,odd,1,1.23456789,") != std::string::npos);
  std::istringstream is(text);
  std::vector<std::string> header;
  const auto back = read_scan_csv(is, &header);
  REQUIRE(back.size() == 3);
  CHECK(header == std::vector<std::string>{"manifest: test"});
  CHECK(back[1].vanishing == Vanishing::yes);
  CHECK(back[2].vanishing == Vanishing::unresolved);
  CHECK(back[0].value == doctest::Approx(1.23456789).epsilon(1e-12));
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333");

  std::istringstream bad("d,parity\n1,odd\n");
  CHECK_THROWS(read_scan_csv(bad));
}
