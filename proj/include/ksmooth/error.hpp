#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksmooth {

enum class ErrorKind {
  InputError,
  DimensionMismatch,
  NotSymmetric,
  NotFullDimensional,
  UnboundedInput,
  InteriorPoint,
  ExteriorPoint,
  DimensionGuard,
  NotUnitNorm,
  ZeroOperator,
  NotNormalized,
  HypothesisViolation,
  InfeasibleTriple,
  UnmappedCase,
  GeneratorExhausted,
  Unsupported,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InputError: return "InputError";
  case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  case ErrorKind::NotSymmetric: return "NotSymmetric";
  case ErrorKind::NotFullDimensional: return "NotFullDimensional";
  case ErrorKind::UnboundedInput: return "UnboundedInput";
  case ErrorKind::InteriorPoint: return "InteriorPoint";
  case ErrorKind::ExteriorPoint: return "ExteriorPoint";
  case ErrorKind::DimensionGuard: return "DimensionGuard";
  case ErrorKind::NotUnitNorm: return "NotUnitNorm";
  case ErrorKind::ZeroOperator: return "ZeroOperator";
  case ErrorKind::NotNormalized: return "NotNormalized";
  case ErrorKind::HypothesisViolation: return "HypothesisViolation";
  case ErrorKind::InfeasibleTriple: return "InfeasibleTriple";
  case ErrorKind::UnmappedCase: return "UnmappedCase";
  case ErrorKind::GeneratorExhausted: return "GeneratorExhausted";
  case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Input-side failures (exit code 2 in the CLI) versus mathematical outcomes.
inline bool is_input_error(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InfeasibleTriple:
  case ErrorKind::UnmappedCase:
    return false;
  default:
    return true;
  }
}

} // namespace ksmooth
