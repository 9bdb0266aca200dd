#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pedsafe {

/// Reasons an input value can be rejected before it reaches the engine.
enum class ValidationCode {
  NonFinite,
  LatOutOfRange,
  LonOutOfRange,
  OutsideFrame,
  SingularFrame,
  EmptyId,
  NegativeSpeed,
  SpeedAboveCap,
  HeadingOutOfRange,
  StampRegression,
  InvalidParams,
  ClockSkew,
  ContractViolation,
};

std::string_view to_string(ValidationCode code);

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ValidationCode code() const noexcept { return code_; }

 private:
  ValidationCode code_;
};

}  // namespace pedsafe
