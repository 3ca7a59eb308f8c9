#include "crof/error.hpp"

namespace crof {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedElement: return "UnsupportedElement";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InsufficientConstraints: return "InsufficientConstraints";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ProjectionDiverged: return "ProjectionDiverged";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace crof
