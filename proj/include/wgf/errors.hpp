#pragma once

#include <stdexcept>
#include <string>

namespace wgf {

enum class ErrorKind {
  EmptyInput,
  DimensionMismatch,
  NonFiniteCoordinate,
  InvalidParameter,
  SizeMismatch,
  TooLarge,
  NonUniqueOptimum,
  AlphaOutOfRange,
  InvalidPlan,
  EvaluationError,
  StepTooLarge,
  NoConvergence,
  IntegratorNotConverged,
  HypothesisViolated,
};

const char* to_string(ErrorKind kind);

/// Library error carrying one of the contract error kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NonUniqueOptimum: return "NonUniqueOptimum";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::InvalidPlan: return "InvalidPlan";
    case ErrorKind::EvaluationError: return "EvaluationError";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::IntegratorNotConverged: return "IntegratorNotConverged";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
  }
  return "UnknownError";
}

}  // namespace wgf
