#include "symind/error.hpp"

namespace symind {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::NotACrossing: return "NotACrossing";
    case ErrorCode::ChartBreakdown: return "ChartBreakdown";
    case ErrorCode::UnresolvedDegeneracy: return "UnresolvedDegeneracy";
    case ErrorCode::ContinuityBudgetExceeded: return "ContinuityBudgetExceeded";
    case ErrorCode::CoefficientSingular: return "CoefficientSingular";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::DriftBudgetExceeded: return "DriftBudgetExceeded";
    case ErrorCode::NonIsolatedCrossing: return "NonIsolatedCrossing";
    case ErrorCode::ScheduleTooShort: return "ScheduleTooShort";
    case ErrorCode::KernelBasisUnavailable: return "KernelBasisUnavailable";
    case ErrorCode::BracketLimitDiverges: return "BracketLimitDiverges";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::SelectionFailed: return "SelectionFailed";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::BCEliminationSingular: return "BCEliminationSingular";
    case ErrorCode::NoSpectralGap: return "NoSpectralGap";
    case ErrorCode::TransversalityViolated: return "TransversalityViolated";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TailModelMissing: return "TailModelMissing";
    case ErrorCode::LimitPointNoCondition: return "LimitPointNoCondition";
    case ErrorCode::CollisionConfiguration: return "CollisionConfiguration";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::ConvergedToCollision: return "ConvergedToCollision";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::UnnormalizedCC: return "UnnormalizedCC";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::UnknownCatalogEntry: return "UnknownCatalogEntry";
  }
  return "Unknown";
}

std::string_view error_module(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotIsotropic:
    case ErrorCode::RankDeficient:
    case ErrorCode::SpaceMismatch:
    case ErrorCode::NotSymplectic:
      return "symplectic";
    case ErrorCode::NotACrossing:
    case ErrorCode::ChartBreakdown:
    case ErrorCode::UnresolvedDegeneracy:
    case ErrorCode::ContinuityBudgetExceeded:
      return "maslov";
    case ErrorCode::CoefficientSingular:
    case ErrorCode::StepSizeUnderflow:
    case ErrorCode::DriftBudgetExceeded:
    case ErrorCode::NonIsolatedCrossing:
    case ErrorCode::ScheduleTooShort:
    case ErrorCode::KernelBasisUnavailable:
    case ErrorCode::BracketLimitDiverges:
    case ErrorCode::Inconclusive:
    case ErrorCode::SelectionFailed:
      return "sturm_liouville";
    case ErrorCode::GridTooCoarse:
    case ErrorCode::BCEliminationSingular:
    case ErrorCode::NoSpectralGap:
    case ErrorCode::TransversalityViolated:
      return "spectral_flow";
    case ErrorCode::OutOfRange:
    case ErrorCode::TailModelMissing:
    case ErrorCode::LimitPointNoCondition:
      return "bessel";
    case ErrorCode::CollisionConfiguration:
    case ErrorCode::SolverDiverged:
    case ErrorCode::ConvergedToCollision:
    case ErrorCode::NotNormalized:
    case ErrorCode::UnnormalizedCC:
      return "nbody";
    case ErrorCode::ConfigInvalid:
    case ErrorCode::UnknownCatalogEntry:
      return "cli";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_module(code)) + "." + std::string(error_name(code)) + ": " +
                         detail),
      code_(code) {}

std::string Error::qualified_code() const {
  return std::string(error_module(code_)) + "." + std::string(error_name(code_));
}

}  // namespace symind
