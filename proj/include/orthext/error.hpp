#pragma once

#include <stdexcept>
#include <string>

namespace orthext {

enum class ErrorCode {
  NotAligned,
  DegenerateSegment,
  Overflow,
  LineHitsFeature,
  SigmaTooLarge,
  InvalidSelection,
  NoValidBranch,
  InvalidCut,
  NoCutLine,
  PortBlocked,
  NoBaseline,
  InternalInconsistency,
  GuardExceeded,
  ParseError,
  ValidationError,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

/// The single exception type thrown by the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAligned: return "NotAligned";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::LineHitsFeature: return "LineHitsFeature";
    case ErrorCode::SigmaTooLarge: return "SigmaTooLarge";
    case ErrorCode::InvalidSelection: return "InvalidSelection";
    case ErrorCode::NoValidBranch: return "NoValidBranch";
    case ErrorCode::InvalidCut: return "InvalidCut";
    case ErrorCode::NoCutLine: return "NoCutLine";
    case ErrorCode::PortBlocked: return "PortBlocked";
    case ErrorCode::NoBaseline: return "NoBaseline";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::GuardExceeded: return "GuardExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace orthext
