#ifndef CONVSTAT_ERROR_HPP_
#define CONVSTAT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace convstat {

enum class ErrorKind {
  // input / contract violations
  InvalidPmv,
  EmptySample,
  SupportViolation,
  EmptyProduct,
  NeedTwoVariables,
  ZeroInput,
  DimensionMismatch,
  SupportMismatch,
  EmptySizes,
  DegenerateVariable,
  NotPaired,
  LatticeViolation,
  InvalidCoefficient,
  ZeroExpected,
  RankOutOfRange,
  NotSymmetric,
  DomainError,
  ModelDegenerate,
  InvalidScenario,
  // numerical failures
  NoConvergence,
};

inline std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures caused by the numerics rather than by the caller's input.
constexpr bool is_numerical(ErrorKind kind) noexcept {
  return kind == ErrorKind::NoConvergence;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidPmv: return "InvalidPmv";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::EmptyProduct: return "EmptyProduct";
    case ErrorKind::NeedTwoVariables: return "NeedTwoVariables";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SupportMismatch: return "SupportMismatch";
    case ErrorKind::EmptySizes: return "EmptySizes";
    case ErrorKind::DegenerateVariable: return "DegenerateVariable";
    case ErrorKind::NotPaired: return "NotPaired";
    case ErrorKind::LatticeViolation: return "LatticeViolation";
    case ErrorKind::InvalidCoefficient: return "InvalidCoefficient";
    case ErrorKind::ZeroExpected: return "ZeroExpected";
    case ErrorKind::RankOutOfRange: return "RankOutOfRange";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ModelDegenerate: return "ModelDegenerate";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

}  // namespace convstat

#endif  // CONVSTAT_ERROR_HPP_
