#pragma once

#include <stdexcept>
#include <string>

namespace covpovm {

enum class ErrorCode {
  NotAssociative,
  NoIdentity,
  NoInverse,
  NotASubgroup,
  NotUnitary,
  NotProjectiveRep,
  DimensionMismatch,
  DegenerateProbe,
  ReconstructionFailure,
  NotNormalized,
  InvalidState,
  NotAWitness,
  NotInvariant,
  OutcomeMismatch,
  InvalidPriors,
  InvalidEnsemble,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Every failure the library raises carries a machine-readable code plus a
/// message naming the first offending element, pair or index, so callers can
/// both branch on the cause and show something actionable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace covpovm
