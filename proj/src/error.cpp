#include "rjdbase/error.hpp"

namespace rjdbase {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::CountExceedsDim: return "CountExceedsDim";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::DegenerateBandwidth: return "DegenerateBandwidth";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::UnknownRecipe: return "UnknownRecipe";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::ZeroModeAmbiguity: return "ZeroModeAmbiguity";
    case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::NonOrthonormalEmbedding: return "NonOrthonormalEmbedding";
    case ErrorCode::NonOrthogonalInit: return "NonOrthogonalInit";
    case ErrorCode::EmptyClusterRestart: return "EmptyClusterRestart";
    case ErrorCode::ZeroNormRow: return "ZeroNormRow";
    case ErrorCode::KExceedsN: return "KExceedsN";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::AllTrialsFailed: return "AllTrialsFailed";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace rjdbase
