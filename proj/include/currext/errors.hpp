#pragma once

#include <stdexcept>
#include <string>

namespace currext {

enum class ErrorKind {
  IllegalType,
  NotDominant,
  RankMismatch,
  NotSimpleFactor,
  ArityMismatch,
  InvalidPoint,
  DuplicatePoints,
  ContextMismatch,
  BadIndex,
  RequiresConnectedFlag,
  TrivialAlgebra,
  NotLinked,
  BoundExceeded,
  UnsupportedTypeForOracle,
  DimensionCap,
  SupportNotCovered,
  NotACocycle,
  ParseError,
  ValidationError,
  ComputationError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IllegalType: return "IllegalType";
    case ErrorKind::NotDominant: return "NotDominant";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::NotSimpleFactor: return "NotSimpleFactor";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::RequiresConnectedFlag: return "RequiresConnectedFlag";
    case ErrorKind::TrivialAlgebra: return "TrivialAlgebra";
    case ErrorKind::NotLinked: return "NotLinked";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::UnsupportedTypeForOracle: return "UnsupportedTypeForOracle";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::SupportNotCovered: return "SupportNotCovered";
    case ErrorKind::NotACocycle: return "NotACocycle";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::ComputationError: return "ComputationError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so that front ends can
/// map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace currext
