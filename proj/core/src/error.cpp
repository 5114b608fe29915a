#include "covpovm/error.hpp"

namespace covpovm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAssociative: return "NotAssociative";
    case ErrorCode::NoIdentity: return "NoIdentity";
    case ErrorCode::NoInverse: return "NoInverse";
    case ErrorCode::NotASubgroup: return "NotASubgroup";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotProjectiveRep: return "NotProjectiveRep";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateProbe: return "DegenerateProbe";
    case ErrorCode::ReconstructionFailure: return "ReconstructionFailure";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NotAWitness: return "NotAWitness";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::OutcomeMismatch: return "OutcomeMismatch";
    case ErrorCode::InvalidPriors: return "InvalidPriors";
    case ErrorCode::InvalidEnsemble: return "InvalidEnsemble";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace covpovm
