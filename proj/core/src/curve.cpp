#include "qtwist/curve.hpp"

#include <set>
#include <sstream>

#include "qtwist/error.hpp"

namespace qtwist {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}


}  // namespace

const char* to_string(Kodaira k) {
  switch (k) {
    case Kodaira::split: return "split";
    case Kodaira::nonsplit: return "nonsplit";
    case Kodaira::additive: return "additive";
  }
  return "?";
}

int EtaQuotientSpec::weighted_scale() const {
  int s = 0;
  for (const auto& f : factors) s += f.scale * f.exponent;
  return s;
}

int EtaQuotientSpec::weight_twice() const {
  int s = 0;
  for (const auto& f : factors) s += f.exponent;
  return s;
}

const LocalData* CurveConfig::local_at(std::uint64_t p) const {
  for (const auto& l : local) {
    if (l.p == p) return &l;
  }
  return nullptr;
}

Invariants invariants(const std::array<std::int64_t, 5>& a) {
  const i128 a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
  Invariants v{};
  v.b2 = a1 * a1 + 4 * a2;
  v.b4 = 2 * a4 + a1 * a3;
  v.b6 = a3 * a3 + 4 * a6;
  v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  v.c4 = v.b2 * v.b2 - 24 * v.b4;
  v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
  v.discriminant = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
  return v;
}

void validate(const CurveConfig& cfg) {
  const Invariants inv = invariants(cfg.a);
  if (inv.discriminant == 0) throw ConfigError("curve '" + cfg.label + "': singular model (discriminant 0)");
  if (cfg.sign != 1 && cfg.sign != -1) throw ConfigError("curve '" + cfg.label + "': sign must be +1 or -1");
  if (cfg.conductor == 0) throw ConfigError("curve '" + cfg.label + "': conductor must be positive");
  if (cfg.torsion < 1) throw ConfigError("curve '" + cfg.label + "': torsion order must be positive");

  std::set<std::uint64_t> seen;
  for (const auto& l : cfg.local) {
    if (!seen.insert(l.p).second)
      throw ConfigError("curve '" + cfg.label + "': duplicate local data for p=" + std::to_string(l.p));
    if (l.p < 2 || cfg.conductor % l.p != 0)
      throw ConfigError("curve '" + cfg.label + "': local data for p=" + std::to_string(l.p) +
                        " which does not divide the conductor");
    if (l.tamagawa < 1) throw ConfigError("curve '" + cfg.label + "': Tamagawa number must be positive");
  }
  for (const auto& [p, e] : factorize(cfg.conductor)) {
    if (!seen.count(p))
      throw ConfigError("curve '" + cfg.label + "': missing local data for p=" + std::to_string(p));
  }
}

Rational Rational::make(i128 num, i128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::uint64_t Rational::mod(std::uint64_t p) const {
  const i128 P = static_cast<i128>(p);
  i128 n = num % P;
  if (n < 0) n += P;
  i128 d = den % P;
  if (d == 0) throw DomainError("denominator not invertible modulo " + std::to_string(p));
  // Fermat inverse.
  i128 inv = 1, base = d, e = P - 2;
  while (e > 0) {
    if (e & 1) inv = inv * base % P;
    base = base * base % P;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(n * inv % P);
}

ShortModel to_short_form(const std::array<std::int64_t, 5>& a) {
  const Invariants inv = invariants(a);
  if (inv.discriminant == 0) {
    std::ostringstream os;
    os << "singular Weierstrass model [" << a[0] << "," << a[1] << "," << a[2] << "," << a[3] << "," << a[4]
       << "]: discriminant is 0";
    throw ConfigError(os.str());
  }
  ShortModel m;
  m.c4 = inv.c4;
  m.c6 = inv.c6;
  m.discriminant = inv.discriminant;
  m.A = Rational::make(-inv.c4, 48);
  m.B = Rational::make(-inv.c6, 864);
  m.source = a;
  if (inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6 != 1728 * inv.discriminant)
    throw ConfigError("c4/c6 identity failed for discriminant " + to_decimal(inv.discriminant) + " (overflow?)");
  return m;
}

}  // namespace qtwist
