#include "nodal_atlas/errors.hpp"

namespace nodal_atlas {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::MixedEigenvalue: return "MixedEigenvalue";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorCode::EmptyCircle: return "EmptyCircle";
    case ErrorCode::NetConstructionFailed: return "NetConstructionFailed";
    case ErrorCode::NoValidDirection: return "NoValidDirection";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::UnresolvedAmbiguity: return "UnresolvedAmbiguity";
    case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
    case ErrorCode::DegenerateRestriction: return "DegenerateRestriction";
    case ErrorCode::TransversalityFailure: return "TransversalityFailure";
    case ErrorCode::NotInSectorClass: return "NotInSectorClass";
    case ErrorCode::GraphInconsistency: return "GraphInconsistency";
  }
  return "Unknown";
}

AtlasError::AtlasError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw AtlasError(code, message); }

}  // namespace nodal_atlas
