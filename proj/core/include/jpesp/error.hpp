#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace jpesp {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed arguments outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Argument outside a function's mathematical domain (e.g. alpha <= 0).
class DomainError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Requested value is not attainable; carries the attainable interval.
class RangeError : public InvalidArgument {
 public:
  RangeError(const std::string& what, double lo, double hi)
      : InvalidArgument(what), lower(lo), upper(hi) {}
  double lower;
  double upper;
};

/// Malformed input file. The message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A plan cannot satisfy the budgets or uses a non-existent edge.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A brute-force reference refused an instance above its size cap.
class RefusedError : public Error {
 public:
  using Error::Error;
};

/// A validation finding. `code` is stable and machine-matchable.
struct Violation {
  std::string code;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

using Violations = std::vector<Violation>;

}  // namespace jpesp
