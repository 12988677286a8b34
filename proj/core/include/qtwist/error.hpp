#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qtwist {

/// Failure classes. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  usage = 1,   // bad arguments or inputs outside an operation's domain
  config = 2,  // malformed or inconsistent curve configuration
  budget = 3,  // a term, table or enumeration budget would be exceeded
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::uint64_t required)
      : Error(ErrorKind::budget, what), required_(required) {}
  /// The budget that would have been needed (terms, pairs, primes...).
  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// Raised for d with gcd(d, 2N) > 1; scans skip these instead of failing.
class UnsupportedDiscriminant : public DomainError {
 public:
  UnsupportedDiscriminant(const std::string& what, std::int64_t d) : DomainError(what), d_(d) {}
  std::int64_t d() const noexcept { return d_; }

 private:
  std::int64_t d_;
};

/// A coefficient table is shorter than the series needs.
class InsufficientTerms : public BudgetError {
 public:
  using BudgetError::BudgetError;
};

/// A provider could not supply a_p for some prime below the bound.
class PartialTableError : public BudgetError {
 public:
  PartialTableError(const std::string& what, std::uint64_t first_missing_prime)
      : BudgetError(what, first_missing_prime) {}
  std::uint64_t missing_prime() const noexcept { return required(); }
};

}  // namespace qtwist
