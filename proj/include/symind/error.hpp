#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symind {

enum class ErrorCode {
  // symplectic-core
  NotIsotropic,
  RankDeficient,
  SpaceMismatch,
  NotSymplectic,
  // maslov
  NotACrossing,
  ChartBreakdown,
  UnresolvedDegeneracy,
  ContinuityBudgetExceeded,
  // sturm-liouville
  CoefficientSingular,
  StepSizeUnderflow,
  DriftBudgetExceeded,
  NonIsolatedCrossing,
  ScheduleTooShort,
  KernelBasisUnavailable,
  BracketLimitDiverges,
  Inconclusive,
  SelectionFailed,
  // spectral-flow-lab
  GridTooCoarse,
  BCEliminationSingular,
  NoSpectralGap,
  TransversalityViolated,
  // bessel
  OutOfRange,
  TailModelMissing,
  LimitPointNoCondition,
  // nbody
  CollisionConfiguration,
  SolverDiverged,
  ConvergedToCollision,
  NotNormalized,
  UnnormalizedCC,
  // cli
  ConfigInvalid,
  UnknownCatalogEntry,
};

std::string_view error_name(ErrorCode code);
std::string_view error_module(ErrorCode code);

/// Exception carrying a module-qualified error code, e.g. "maslov.UnresolvedDegeneracy".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string qualified_code() const;

 private:
  ErrorCode code_;
};

}  // namespace symind
