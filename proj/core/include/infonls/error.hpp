#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infonls {

enum class ErrorCode {
  InvalidArgument,
  ZeroNorm,
  StepTooLarge,
  IncommensurateShift,
  BumpTooLarge,
  UnstableStep,
  NonFinite,
  ConvergenceFailure,
  DomainError,
  NodeDetected,
  NonFiniteObjective,
  DomainTooShort,
  AllPointsExcluded,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace infonls
