#include "qsl/error.hpp"

namespace qsl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotUnitaryBasis: return "NotUnitaryBasis";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::EnergyBelowGroundState: return "EnergyBelowGroundState";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::StateInvariantViolation: return "StateInvariantViolation";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::AmplitudeZero: return "AmplitudeZero";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qsl
