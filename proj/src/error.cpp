#include "polsar/error.hpp"

namespace polsar {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::InvalidObservation: return "InvalidObservation";
    case ErrorCode::InvalidLooks: return "InvalidLooks";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::MalformedRoi: return "MalformedRoi";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingBaseline: return "MissingBaseline";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace polsar
