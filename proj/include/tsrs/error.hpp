#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsrs {

/// Machine-readable failure categories. Every value maps to a distinct CLI
/// exit status (see `exit_status`).
enum class ErrorCode {
  InvalidRatio = 1,
  NotCommensurate,
  NotInScale,
  OutOfRange,
  TooMany,
  InvalidScale,
  UnsupportedScale,
  SyntaxError,
  DomainError,
  GNotIncreasing,
  NonTermination,
  NoConvergence,
  SampleOutOfBox,
  PhiNotIncreasing,
  InvalidPartition,
  InvalidArgument,
};

inline constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::NotCommensurate: return "NotCommensurate";
    case ErrorCode::NotInScale: return "NotInScale";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooMany: return "TooMany";
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::UnsupportedScale: return "UnsupportedScale";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::GNotIncreasing: return "GNotIncreasing";
    case ErrorCode::NonTermination: return "NonTermination";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SampleOutOfBox: return "SampleOutOfBox";
    case ErrorCode::PhiNotIncreasing: return "PhiNotIncreasing";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Process exit status used by the command line front end.
inline constexpr int exit_status(ErrorCode code) noexcept {
  return 10 + static_cast<int>(code);
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Parse failure with the byte offset where it was detected.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorCode::SyntaxError,
              "at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace tsrs
