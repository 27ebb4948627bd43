#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pslab {

enum class ErrorCode {
  NonUnimodular,
  DecompositionFailure,
  SingularSystem,
  AsymmetricTheta,
  BadIndex,
  BudgetExceeded,
  NotFree,
  InsufficientGap,
  ThetaMismatch,
  NotProximal,
  NotTransverse,
  NegativePhiOnCone,
  WindowEmpty,
  SubcriticalS,
  BoundaryPoint,
  UnsupportedFamily,
  DegenerateScales,
  ConfigInvalid,
  InvalidArgument,
};

std::string_view errorName(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to a machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorName(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by uTheta when a root value of kappa falls below the gap tolerance.
class InsufficientGapError : public Error {
 public:
  InsufficientGapError(int root, double value)
      : Error(ErrorCode::InsufficientGap,
              "alpha_" + std::to_string(root) + " = " + std::to_string(value)),
        root_(root),
        value_(value) {}

  int root() const noexcept { return root_; }
  double value() const noexcept { return value_; }

 private:
  int root_;
  double value_;
};

}  // namespace pslab
