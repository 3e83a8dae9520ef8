#pragma once

#include <stdexcept>
#include <string>

namespace gclm {

enum class ErrorKind {
  PoleCollision,
  SingularLocation,
  InvalidState,
  SolutionSingular,
  OutOfRange,
  NoConvergence,
  NotCollapsing,
  InsufficientData,
  VerticalSlope,
  CFLViolation,
  ConfigError,
  InvalidArgument
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::PoleCollision: return "PoleCollision";
    case ErrorKind::SingularLocation: return "SingularLocation";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::SolutionSingular: return "SolutionSingular";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotCollapsing: return "NotCollapsing";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::VerticalSlope: return "VerticalSlope";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gclm
