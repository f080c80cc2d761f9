#pragma once

#include <stdexcept>
#include <string>

namespace pathcalc {

enum class ErrorCode {
  LengthMismatch = 1,
  NonMonotoneTimes,
  NonFiniteValue,
  OutOfDomain,
  BadParameter,
  ParseError,
  MissingColumn,
  EmptyMonitorSet,
  DomainMismatch,
  DimensionMismatch,
  NonPositivePath,
  TooFewSamples,
  BadWeight,
  QVRangeExceeded,
  EmptyEnsemble,
  DegenerateDenominator,
  IOError,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure in the library is reported as one of these; the C API maps
// the code one-to-one onto pc_status.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace pathcalc
