#pragma once

#include <stdexcept>
#include <string>

namespace lgpc {

enum class ErrorCode {
  InvalidParameter,
  DimensionMismatch,
  Validation,
  CholeskyFailure,
  EnvelopeFailure,
  NonStationaryCoefficients,
  InsufficientData,
  ConvergenceFailure,
  EmptyPosterior,
  InvalidPmf,
  Divergence,
  RankDeficient,
  NotConverged,
  Parse,
  Schema,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; translated to status codes at
/// the C boundary.
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

}  // namespace lgpc
