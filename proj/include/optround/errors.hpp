#pragma once

#include <stdexcept>
#include <string>

namespace optround {

enum class ErrorCode {
  EmptyInput,
  NegativeEntry,
  SumNotInteger,
  InfeasibleTarget,
  LengthMismatch,
  InvalidExponent,
  ZeroComponent,
  InvalidThreshold,
  TooManyComponents,
  EvaluationFailure,
  PrecisionOverflow,
  NonPositiveVotes,
  ParseError,
  InvalidArgument,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::SumNotInteger: return "SumNotInteger";
    case ErrorCode::InfeasibleTarget: return "InfeasibleTarget";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::ZeroComponent: return "ZeroComponent";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::TooManyComponents: return "TooManyComponents";
    case ErrorCode::EvaluationFailure: return "EvaluationFailure";
    case ErrorCode::PrecisionOverflow: return "PrecisionOverflow";
    case ErrorCode::NonPositiveVotes: return "NonPositiveVotes";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace optround
