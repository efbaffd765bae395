#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rjdbase {

// Every failure the library raises carries one of these codes. The C API maps
// them one-to-one onto rjd_status values.
enum class ErrorCode {
  InvalidArgument = 1,
  NonFinite,
  CountExceedsDim,
  DimensionMismatch,
  NonPositiveSigma,
  DegenerateBandwidth,
  IsolatedNode,
  UnknownRecipe,
  EmptyCluster,
  ZeroModeAmbiguity,
  NonFiniteObjective,
  NonOrthonormalEmbedding,
  NonOrthogonalInit,
  EmptyClusterRestart,
  ZeroNormRow,
  KExceedsN,
  LengthMismatch,
  AllTrialsFailed,
  EigenSolverFailure,
  Io,
  Parse,
  Internal,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix, for re-raising with added context.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace rjdbase
