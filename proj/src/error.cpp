#include "pathcalc/error.hpp"

namespace pathcalc {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonMonotoneTimes: return "NonMonotoneTimes";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::EmptyMonitorSet: return "EmptyMonitorSet";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositivePath: return "NonPositivePath";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::BadWeight: return "BadWeight";
    case ErrorCode::QVRangeExceeded: return "QVRangeExceeded";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace pathcalc
