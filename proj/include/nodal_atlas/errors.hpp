// Error type shared by every nodal_atlas module.
#pragma once

#include <stdexcept>
#include <string>

namespace nodal_atlas {

enum class ErrorCode {
  InvalidInput,
  PreconditionViolation,
  MixedEigenvalue,
  EmptySpectrum,
  InvalidPair,
  NotAnEigenvalue,
  EmptyCircle,
  NetConstructionFailed,
  NoValidDirection,
  ResolutionTooCoarse,
  UnresolvedAmbiguity,
  RadiusTooLarge,
  DegenerateRestriction,
  TransversalityFailure,
  NotInSectorClass,
  GraphInconsistency,
};

const char* to_string(ErrorCode code) noexcept;

class AtlasError : public std::runtime_error {
 public:
  AtlasError(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace nodal_atlas
