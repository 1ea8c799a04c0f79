#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace transrad {

/// Identifies which contract a computation refused or failed.
enum class ErrorCode {
  InvalidMatrix,
  InvalidVector,
  InvalidTolerance,
  DimensionMismatch,
  NotHermitian,
  KernelVector,
  NumericalRangeZero,
  SingularDirection,
  NonConvergence,
  UnsupportedDimension,
  DegenerateMaximizer,
  NotSelfadjoint,
  HypothesisViolated,
  DegenerateStationary,
  StateOutsideP,
  NotAState,
  CertificateNotFound,
  NumericalFailure,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::InvalidVector: return "InvalidVector";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::KernelVector: return "KernelVector";
    case ErrorCode::NumericalRangeZero: return "NumericalRangeZero";
    case ErrorCode::SingularDirection: return "SingularDirection";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::DegenerateMaximizer: return "DegenerateMaximizer";
    case ErrorCode::NotSelfadjoint: return "NotSelfadjoint";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::DegenerateStationary: return "DegenerateStationary";
    case ErrorCode::StateOutsideP: return "StateOutsideP";
    case ErrorCode::NotAState: return "NotAState";
    case ErrorCode::CertificateNotFound: return "CertificateNotFound";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace transrad
