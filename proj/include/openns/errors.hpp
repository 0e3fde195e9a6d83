#pragma once

#include <stdexcept>
#include <string>

namespace openns {

/// Error taxonomy shared across the library. Harness code maps these onto
/// typed failure rows instead of aborting a sweep.
enum class ErrorCode {
  BadConfig,
  UnknownKey,
  BadSnapshot,
  ZeroBehaviorProb,
  OutOfRange,
  DimensionMismatch,
  ZeroWeightMass,
  IneffectiveSample,
  InsufficientData,
  SingularSystem,
  WeakInstrument,
  NonFinite,
  Io,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadConfig: return "bad-config";
    case ErrorCode::UnknownKey: return "unknown-key";
    case ErrorCode::BadSnapshot: return "bad-snapshot";
    case ErrorCode::ZeroBehaviorProb: return "zero-behavior-prob";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::ZeroWeightMass: return "zero-weight-mass";
    case ErrorCode::IneffectiveSample: return "ineffective-sample";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::SingularSystem: return "singular-system";
    case ErrorCode::WeakInstrument: return "weak-instrument";
    case ErrorCode::NonFinite: return "non-finite";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace openns
