#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crof {

enum class ErrorCode {
  InvalidIndex,
  NonManifoldEdge,
  NonOrientable,
  DegenerateFace,
  ParseError,
  UnsupportedElement,
  IoError,
  InvalidName,
  InvalidArgument,
  DimensionMismatch,
  InsufficientConstraints,
  SolveFailure,
  NoConvergence,
  ProjectionDiverged,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the C
// API maps them onto integer status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace crof
