#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stablesim {

/// Base class for all stablesim errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter failed validation. `field()` names the offending field
/// using its conventional symbol (e.g. "B").
class InvalidParamError : public Error {
 public:
  InvalidParamError(std::string field, const std::string& what)
      : Error("invalid parameter " + field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A rebase would multiply supply by a non-positive factor (1 + d/B <= 0).
/// Only reachable for B < 1, since d > -1 whenever the price is positive.
class DegenerateSupplyError : public Error {
 public:
  DegenerateSupplyError(const std::string& what, std::int64_t step = -1)
      : Error(step >= 0 ? what + " (at step " + std::to_string(step) + ")" : what),
        step_(step) {}

  /// Step index at which the rebase failed, or -1 if not attributed to a path.
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

/// Every path of a Monte Carlo estimate hit DegenerateSupply.
class AllPathsFailedError : public Error {
 public:
  using Error::Error;
};

/// Argmin requested on a surface with no successful cell.
class EmptySurfaceError : public Error {
 public:
  using Error::Error;
};

/// Errors raised while ingesting historical rebase records. All carry the
/// 1-based line number of the offending input line (0 when not applicable).
class HistoryError : public Error {
 public:
  HistoryError(const std::string& what, std::int64_t line)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::int64_t line() const noexcept { return line_; }

 private:
  std::int64_t line_;
};

/// Malformed input: wrong header, wrong column count, unparseable field.
class ParseError : public HistoryError {
 public:
  using HistoryError::HistoryError;
};

/// Timestamps not strictly increasing.
class OrderError : public HistoryError {
 public:
  using HistoryError::HistoryError;
};

/// A parsed value violates a domain invariant (e.g. supply <= 0).
class ValueError : public HistoryError {
 public:
  using HistoryError::HistoryError;
};

/// Fewer records than an operation needs.
class TooFewRecordsError : public Error {
 public:
  using Error::Error;
};

}  // namespace stablesim
