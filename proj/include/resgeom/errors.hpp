#pragma once

#include <stdexcept>
#include <string>

namespace resgeom {

enum class ErrorCode {
  SyntaxError,
  NonPositiveWeight,
  SelfLoop,
  Disconnected,
  TooFewNodes,
  NotALaplacian,
  NonSquare,
  NonFiniteEntry,
  Asymmetric,
  DimensionMismatch,
  NoConvergence,
  SingularShift,
  RankDeficient,
  IndexOutOfRange,
  NonZeroDiagonal,
  NegativeEntry,
  DegenerateSimplex,
  DegenerateDistanceMatrix,
  EmptySubset,
  DuplicateIndex,
  FaceTooSmall,
  EmptyKeptSet,
  TooSmall,
  SubsetViolation,
  InternalConsistency,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::NotALaplacian: return "NotALaplacian";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::DegenerateDistanceMatrix: return "DegenerateDistanceMatrix";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::FaceTooSmall: return "FaceTooSmall";
    case ErrorCode::EmptyKeptSet: return "EmptyKeptSet";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::SubsetViolation: return "SubsetViolation";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above, so
/// callers (the CLI in particular) can branch on the kind without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace resgeom
