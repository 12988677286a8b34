#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qtwist/coefficients.hpp"
#include "qtwist/lvalue.hpp"
#include "qtwist/twist.hpp"

namespace qtwist {

enum class Vanishing { no, yes, unresolved };

const char* to_string(Vanishing v);

/// One scanned twist. value is L(E_d,1) for even and L'(E_d,1) for odd twists.
struct TwistRecord {
  std::int64_t d = 0;
  Parity parity = Parity::even;
  int order = 0;
  double value = 0.0;
  double error = 0.0;
  double normalised = 0.0;  // value / (log|d|)^order
  Vanishing vanishing = Vanishing::no;
  std::size_t terms = 0;
  bool negative = false;  // even twist with value < -error; reported, never clamped
};

/// Two-stage vanishing test. With L = log|d| and r the order:
/// the coarse pass evaluates to error coarse_eps L^r and accepts the value as
/// nonzero when it exceeds twice that; otherwise the refine pass evaluates to
/// error refine_eps L^r / 10 and the twist vanishes iff |value| <= refine_eps L^r.
struct ScanPolicy {
  double coarse_eps = 1e-2;
  double refine_eps = 1e-4;
  std::optional<Parity> parity;  // nullopt scans both
  SignFilter signs = SignFilter::both;
  unsigned workers = 0;
};

struct ScanResult {
  std::vector<TwistRecord> records;
  std::vector<std::int64_t> skipped;  // fundamental d with gcd(d, 2N) > 1
  std::size_t unresolved = 0;
  std::size_t negative = 0;
};

/// Coefficients a scan up to |d| < X needs so that no record is unresolved.
std::size_t scan_terms_needed(const CurveConfig& base, std::uint64_t X, const ScanPolicy& policy);

/// Evaluates every eligible fundamental d with 1 < |d| < X. Records are in
/// enumeration order and do not depend on the worker count.
ScanResult scan(const CurveConfig& base, const CoefficientTable& table, std::uint64_t X, const ScanPolicy& policy);

/// The single-twist step of scan(), exposed for tests and the CLI.
TwistRecord evaluate_twist(const CurveConfig& base, const CoefficientTable& table, std::int64_t d,
                           const ScanPolicy& policy, const PrimeSieve* sieve = nullptr);

}  // namespace qtwist
