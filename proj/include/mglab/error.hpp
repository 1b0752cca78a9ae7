#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mglab {

enum class ErrorCode {
  ConstantSeries,
  LengthMismatch,
  OutOfRange,
  NonFiniteInput,
  ConfigMisaligned,
  DimensionMismatch,
  ZeroSpectralRadius,
  WindowTooShort,
  TooManyLayers,
  InsufficientHistory,
  InsufficientData,
  SpecInvalid,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the harness in particular) can classify without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mglab
