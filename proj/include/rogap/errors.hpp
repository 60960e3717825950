#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rogap {

enum class ErrorCode {
  SizeExceedsCapacity,
  NonPositiveSize,
  NonPositiveCapacity,
  NonPositiveValue,
  NegativeValue,
  DimensionMismatch,
  IndexOutOfRange,
  EmptyInstance,
  BadRange,
  UnknownFamily,
  EmptySupport,
  ParseError,
  NumericalFailure,
  BudgetExceeded,
  RowSumExceedsOne,
  NegativeSummand,
  BadArguments,
  TapeLengthMismatch,
  InvariantViolation,
  ConfigError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeExceedsCapacity: return "SizeExceedsCapacity";
    case ErrorCode::NonPositiveSize: return "NonPositiveSize";
    case ErrorCode::NonPositiveCapacity: return "NonPositiveCapacity";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyInstance: return "EmptyInstance";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::RowSumExceedsOne: return "RowSumExceedsOne";
    case ErrorCode::NegativeSummand: return "NegativeSummand";
    case ErrorCode::BadArguments: return "BadArguments";
    case ErrorCode::TapeLengthMismatch: return "TapeLengthMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Error raised by every rogap operation. Bin and item indices are stored
/// 0-based; messages print them 1-based to match the usual (i, j) notation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> bin = std::nullopt,
        std::optional<std::size_t> item = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        bin_(bin),
        item_(item) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> bin() const noexcept { return bin_; }
  std::optional<std::size_t> item() const noexcept { return item_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> bin_;
  std::optional<std::size_t> item_;
};

}  // namespace rogap
