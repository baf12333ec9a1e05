#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tlif {

enum class ErrorCode {
  InvalidParameter,
  InvalidInterval,
  NonConvergence,
  NoisyLimit,
  MomentDiverges,
  DegenerateDenominator,
  DomainError,
  KinkPoint,
  ParseError,
  EmptyInput,
  NegativeIncome,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& message, double estimate, double error_bound)
      : Error(ErrorCode::NonConvergence, message),
        estimate_(estimate),
        error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Successive extrapolants of a one-sided limit disagree.
class NoisyLimit : public Error {
 public:
  NoisyLimit(const std::string& message, double estimate, double error_estimate)
      : Error(ErrorCode::NoisyLimit, message),
        estimate_(estimate),
        error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// Input row carrying a 1-based row number (header rows count).
class RowError : public Error {
 public:
  RowError(ErrorCode code, const std::string& message, std::size_t row)
      : Error(code, message), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace tlif
