#include "qtwist/scan.hpp"

#include <cmath>
#include <limits>

#include "qtwist/error.hpp"
#include "qtwist/parallel.hpp"

namespace qtwist {

namespace {

double log_scale(std::int64_t d, int r) { return std::pow(std::log(std::abs(static_cast<double>(d))), r); }

void check_policy(const ScanPolicy& p) {
  if (!(p.coarse_eps > 0) || !(p.refine_eps > 0)) throw DomainError("scan thresholds must be positive");
  if (p.refine_eps > p.coarse_eps) throw DomainError("refine threshold must not exceed the coarse threshold");
}

}  // namespace

const char* to_string(Vanishing v) {
  switch (v) {
    case Vanishing::no: return "false";
    case Vanishing::yes: return "true";
    case Vanishing::unresolved: return "unresolved";
  }
  return "?";
}

std::size_t scan_terms_needed(const CurveConfig& base, std::uint64_t X, const ScanPolicy& policy) {
  check_policy(policy);
  if (X <= 2) return 1;
  const auto d = static_cast<std::int64_t>(X - 1);
  const std::uint64_t N = base.conductor * static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
  std::size_t M = 1;
  for (int r = 0; r <= 1; ++r) {
    if (policy.parity && static_cast<int>(*policy.parity) != r) continue;
    M = std::max(M, terms_needed(N, r, policy.refine_eps * log_scale(d, r) / 10.0));
  }
  return M;
}

TwistRecord evaluate_twist(const CurveConfig& base, const CoefficientTable& table, std::int64_t d,
                           const ScanPolicy& policy, const PrimeSieve* sieve) {
  const TwistSpec tw = make_twist(base, d);
  TwistRecord rec;
  rec.d = d;
  rec.parity = tw.parity;
  rec.order = tw.parity == Parity::even ? 0 : 1;
  const double scale = log_scale(d, rec.order);
  const double e_coarse = policy.coarse_eps * scale;
  const double e_refine = policy.refine_eps * scale;

  const std::size_t need = terms_needed(tw.conductor, rec.order, e_refine / 10.0);
  const std::size_t M = std::min(need, table.bound());
  const auto chi = (sieve && sieve->limit() >= M) ? character_table(d, M, *sieve) : character_table(d, M);
  const SeriesInput in{table.view().first(M + 1), chi, tw.conductor};

  auto finish = [&](const LValue& v, Vanishing state) {
    rec.value = v.value;
    rec.error = v.error;
    rec.terms = v.terms;
    rec.normalised = v.value / scale;
    rec.vanishing = state;
    rec.negative = rec.parity == Parity::even && v.value < -v.error;
    return rec;
  };

  LValue coarse;
  try {
    coarse = l_derivative(in, rec.order, e_coarse);
  } catch (const InsufficientTerms& e) {
    rec.value = rec.error = rec.normalised = std::numeric_limits<double>::quiet_NaN();
    rec.terms = e.required();
    rec.vanishing = Vanishing::unresolved;
    return rec;
  }
  if (std::abs(coarse.value) > 2.0 * e_coarse) return finish(coarse, Vanishing::no);
  try {
    const LValue fine = l_derivative(in, rec.order, e_refine / 10.0);
    return finish(fine, std::abs(fine.value) <= e_refine ? Vanishing::yes : Vanishing::no);
  } catch (const InsufficientTerms&) {
    return finish(coarse, Vanishing::unresolved);
  }
}

ScanResult scan(const CurveConfig& base, const CoefficientTable& table, std::uint64_t X, const ScanPolicy& policy) {
  check_policy(policy);
  ScanResult out;
  std::vector<std::int64_t> eligible;
  for (std::int64_t d : enumerate_fundamental(X, policy.signs)) {
    try {
      const Parity p = twist_parity(base, d);
      if (!policy.parity || *policy.parity == p) eligible.push_back(d);
    } catch (const UnsupportedDiscriminant&) {
      out.skipped.push_back(d);
    }
  }
  if (eligible.empty()) return out;
  const PrimeSieve sieve(static_cast<std::uint32_t>(table.bound()));
  out.records.resize(eligible.size());
  const unsigned workers = policy.workers ? policy.workers : default_workers();
  parallel_for(eligible.size(), workers, 4, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out.records[i] = evaluate_twist(base, table, eligible[i], policy, &sieve);
  });
  for (const auto& r : out.records) {
    if (r.vanishing == Vanishing::unresolved) ++out.unresolved;
    if (r.negative) ++out.negative;
  }
  return out;
}

}  // namespace qtwist
