#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polsar {

enum class ErrorCode {
  SingularMatrix,
  NotPositiveDefinite,
  InvalidObservation,
  InvalidLooks,
  EmptySample,
  DomainError,
  NoRoot,
  NonFinite,
  StabilityViolation,
  InvalidSpec,
  MalformedHeader,
  SizeMismatch,
  MalformedRoi,
  OutOfBounds,
  IoError,
  MissingBaseline,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// what() without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace polsar
