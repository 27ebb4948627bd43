#include "pslab/errors.hpp"

namespace pslab {

std::string_view errorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnimodular: return "NonUnimodular";
    case ErrorCode::DecompositionFailure: return "DecompositionFailure";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::AsymmetricTheta: return "AsymmetricTheta";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotFree: return "NotFree";
    case ErrorCode::InsufficientGap: return "InsufficientGap";
    case ErrorCode::ThetaMismatch: return "ThetaMismatch";
    case ErrorCode::NotProximal: return "NotProximal";
    case ErrorCode::NotTransverse: return "NotTransverse";
    case ErrorCode::NegativePhiOnCone: return "NegativePhiOnCone";
    case ErrorCode::WindowEmpty: return "WindowEmpty";
    case ErrorCode::SubcriticalS: return "SubcriticalS";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::DegenerateScales: return "DegenerateScales";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace pslab
