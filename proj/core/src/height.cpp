#include "qtwist/height.hpp"

#include <gmpxx.h>

#include <cmath>
#include <optional>

#include "qtwist/bsd.hpp"
#include "qtwist/error.hpp"

namespace qtwist {

namespace {

struct Curve {
  mpq_class a1, a2, a3, a4, a6;
};

struct Pt {
  mpq_class x, y;
  bool inf = false;
};

Curve to_curve(const std::array<std::int64_t, 5>& a) {
  auto q = [](std::int64_t v) { return mpq_class(mpz_class(std::to_string(v))); };
  return {q(a[0]), q(a[1]), q(a[2]), q(a[3]), q(a[4])};
}

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw DomainError("bad rational coordinate '" + s + "'");
  if (q.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

bool on_curve(const Curve& E, const Pt& P) {
  if (P.inf) return true;
  const mpq_class lhs = P.y * P.y + E.a1 * P.x * P.y + E.a3 * P.y;
  const mpq_class rhs = P.x * P.x * P.x + E.a2 * P.x * P.x + E.a4 * P.x + E.a6;
  return lhs == rhs;
}

Pt neg(const Curve& E, const Pt& P) {
  if (P.inf) return P;
  return {P.x, -P.y - E.a1 * P.x - E.a3, false};
}

Pt add(const Curve& E, const Pt& P, const Pt& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  mpq_class lambda;
  if (P.x == Q.x) {
    const mpq_class den = 2 * P.y + E.a1 * P.x + E.a3;
    if (P.y != Q.y || den == 0) return {0, 0, true};
    lambda = (3 * P.x * P.x + 2 * E.a2 * P.x + E.a4 - E.a1 * P.y) / den;
  } else {
    lambda = (Q.y - P.y) / (Q.x - P.x);
  }
  const mpq_class nu = P.y - lambda * P.x;
  Pt R;
  R.x = lambda * lambda + E.a1 * lambda - E.a2 - P.x - Q.x;
  R.y = -(lambda + E.a1) * R.x - nu - E.a3;
  return R;
}

Pt mul(const Curve& E, const Pt& P, int k) {
  Pt R{0, 0, true}, B = P;
  for (; k > 0; k >>= 1) {
    if (k & 1) R = add(E, R, B);
    B = add(E, B, B);
  }
  return R;
}

double log_abs(const mpz_class& z) {
  if (z == 0) return -INFINITY;
  long e = 0;
  const double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(std::abs(m)) + static_cast<double>(e) * std::log(2.0);
}

double log_abs(const mpq_class& q) { return log_abs(q.get_num()) - log_abs(q.get_den()); }

// x = num/e^2 for points on an integral model.
mpz_class denominator_root(const mpq_class& x) {
  mpz_class e;
  mpz_sqrt(e.get_mpz_t(), x.get_den().get_mpz_t());
  if (e * e != x.get_den()) throw DomainError("x-denominator is not a square; is the model integral?");
  return e;
}

// True when P reduces to a nonsingular point modulo every prime.
bool everywhere_nonsingular(const Curve& E, const mpz_class& disc, const Pt& P) {
  const mpz_class e = denominator_root(P.x);
  const mpz_class a = P.x.get_num();
  mpq_class yb = P.y * e * e * e;
  if (yb.get_den() != 1) throw DomainError("y-denominator does not match x");
  const mpz_class b = yb.get_num();
  const mpz_class e2 = e * e, e3 = e2 * e, e4 = e2 * e2;
  const mpz_class a1 = E.a1.get_num(), a2 = E.a2.get_num(), a3 = E.a3.get_num(), a4 = E.a4.get_num();
  const mpz_class psi = 2 * b + a1 * a * e + a3 * e3;
  const mpz_class phi = 3 * a * a + 2 * a2 * a * e2 + a4 * e4 - a1 * b * e;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), disc.get_mpz_t(), psi.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), phi.get_mpz_t());
  // Primes dividing e see P reduce to the identity.
  mpz_class c;
  while (true) {
    mpz_gcd(c.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    if (c == 1) break;
    g /= c;
  }
  return g == 1;
}

// Archimedean local height without the discriminant term, by Tate's series.
// An integer shift x' = x - r puts every real point at x' >= 1.
long double lambda_infinity(const std::array<std::int64_t, 5>& ainv, const Pt& P, double* err) {
  const Invariants inv = invariants(ainv);
  const long double b2 = static_cast<long double>(inv.b2), b4 = static_cast<long double>(inv.b4),
                    b6 = static_cast<long double>(inv.b6), b8 = static_cast<long double>(inv.b8);
  // Smallest real root of 4x^3 + b2 x^2 + 2 b4 x + b6; shift so every real point has x' >= 1.
  const double s = static_cast<double>(b2) / 12.0;
  const auto roots = real_roots(static_cast<double>(-(b2 * b2 / 48.0L) + b4 / 2.0L),
                                static_cast<double>(b2 * b2 * b2 / 864.0L - b2 * b4 / 24.0L + b6 / 4.0L));
  const double emin = roots.back() - s;
  const long double r = std::floor(emin - 1.0);
  const long double c2 = b2 + 12 * r;
  const long double c4 = b4 + r * b2 + 6 * r * r;
  const long double c6 = b6 + 2 * r * b4 + r * r * b2 + 4 * r * r * r;
  const long double c8 = b8 + 3 * r * b6 + 3 * r * r * b4 + r * r * r * b2 + 3 * r * r * r * r;

  const mpq_class xs = P.x - mpq_class(mpz_class(std::to_string(static_cast<long long>(r))));
  const long double logx = static_cast<long double>(log_abs(xs));
  long double t = std::exp(-logx);  // 1/x' in (0, 1]
  long double mu = 0.0L, w4 = 1.0L;
  for (int n = 0; n < 40; ++n) {
    const long double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    const long double w = 4 * t + c2 * t2 + 2 * c4 * t3 + c6 * t4;
    const long double z = 1 - c4 * t2 - 2 * c6 * t3 - c8 * t4;
    mu += w4 * std::log(std::fabs(z));
    t = w / z;
    w4 /= 4;
  }
  if (err) *err = static_cast<double>(std::abs(mu) * 1e-16L + w4 * 64);
  return 0.5L * logx + mu / 8;
}

std::string to_string(const mpq_class& q) { return q.get_str(10); }

}  // namespace

HeightResult canonical_height(const std::array<std::int64_t, 5>& ainv, const PointInput& in) {
  const Curve E = to_curve(ainv);
  Pt P{parse_rational(in.x), parse_rational(in.y), false};
  if (!on_curve(E, P)) throw DomainError("point (" + in.x + ", " + in.y + ") is not on the curve");
  HeightResult out;
  out.x = to_string(P.x);
  out.y = to_string(P.y);
  out.naive = std::max(log_abs(P.x.get_num()), log_abs(P.x.get_den()));
  if (P.x.get_num() == 0) out.naive = log_abs(P.x.get_den());

  Pt Q = P;
  for (int k = 1; k <= 12; ++k) {
    if (Q.inf) {
      out.torsion_order = k;
      return out;
    }
    Q = add(E, Q, P);
  }
  const mpz_class disc(to_decimal(invariants(ainv).discriminant));
  for (int m = 1; m <= 64; ++m) {
    const Pt R = mul(E, P, m);
    if (!everywhere_nonsingular(E, disc, R)) continue;
    double err = 0.0;
    const long double lam = lambda_infinity(ainv, R, &err);
    const long double loge = static_cast<long double>(log_abs(denominator_root(R.x)));
    const long double h = 2.0L * (lam + loge) / (static_cast<long double>(m) * m);
    out.canonical = static_cast<double>(h);
    out.error = 2.0 * err / (m * m) + 1e-13 * (1.0 + std::abs(out.canonical));
    out.multiplier = m;
    return out;
  }
  throw DomainError("no multiple mP up to 64 reduces to nonsingular points; is the model minimal?");
}

PointInput multiply_point(const std::array<std::int64_t, 5>& ainv, const PointInput& in, int k) {
  if (k < 1) throw DomainError("multiplier must be positive");
  const Curve E = to_curve(ainv);
  Pt P{parse_rational(in.x), parse_rational(in.y), false};
  if (!on_curve(E, P)) throw DomainError("point is not on the curve");
  const Pt R = mul(E, P, k);
  if (R.inf) throw DomainError("kP is the point at infinity");
  return {to_string(R.x), to_string(R.y)};
}

PointInput negate_point(const std::array<std::int64_t, 5>& ainv, const PointInput& in) {
  const Curve E = to_curve(ainv);
  Pt P{parse_rational(in.x), parse_rational(in.y), false};
  if (!on_curve(E, P)) throw DomainError("point is not on the curve");
  const Pt R = neg(E, P);
  return {to_string(R.x), to_string(R.y)};
}

std::vector<PointInput> search_points(const std::array<std::int64_t, 5>& ainv, std::int64_t x_bound,
                                      std::int64_t e_bound, std::size_t limit) {
  if (x_bound < 1 || e_bound < 1) throw DomainError("search bounds must be positive");
  const Curve E = to_curve(ainv);
  std::vector<PointInput> out;
  for (std::int64_t e = 1; e <= e_bound && out.size() < limit; ++e) {
    const mpz_class ez(static_cast<long>(e)), e2 = ez * ez;
    const std::int64_t ubound = x_bound * e * e;
    for (std::int64_t k = 0; k <= 2 * ubound && out.size() < limit; ++k) {
      const std::int64_t u = (k % 2) ? -(k + 1) / 2 : k / 2;
      mpz_class g;
      const mpz_class uz(static_cast<long>(u));
      mpz_gcd(g.get_mpz_t(), uz.get_mpz_t(), ez.get_mpz_t());
      if (g != 1) continue;
      const mpq_class x(uz, e2);
      // Solve y^2 + (a1 x + a3) y = f(x): discriminant (a1x+a3)^2 + 4 f(x) must be a rational square.
      const mpq_class bq = E.a1 * x + E.a3;
      const mpq_class f = x * x * x + E.a2 * x * x + E.a4 * x + E.a6;
      mpq_class disc = bq * bq + 4 * f;
      disc.canonicalize();
      if (disc < 0) continue;
      if (!mpz_perfect_square_p(disc.get_num().get_mpz_t()) || !mpz_perfect_square_p(disc.get_den().get_mpz_t()))
        continue;
      mpz_class sn, sd;
      mpz_sqrt(sn.get_mpz_t(), disc.get_num().get_mpz_t());
      mpz_sqrt(sd.get_mpz_t(), disc.get_den().get_mpz_t());
      mpq_class y = (mpq_class(sn, sd) - bq) / 2;
      y.canonicalize();
      out.push_back({to_string(x), to_string(y)});
    }
  }
  return out;
}

}  // namespace qtwist
