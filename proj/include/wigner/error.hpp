#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wigner {

enum class ErrorCode {
  InvalidContext,
  ContextMismatch,
  NonHermitianInput,
  NegativeSpectrum,
  DimensionOrder,
  NotAProjection,
  RankMismatch,
  InfeasibleOverlap,
  InfeasibleCover,
  InfeasibleFamily,
  NotBalanced,
  NotDivisible,
  OracleMiss,
  UnsupportedKind,
  UnclassifiableSummand,
  CenterComputationFailure,
  DegenerateAnchor,
  NonIsometricAssembly,
  ConfigInvalid,
  IoFailure,
  ParseFailure,
  DimensionMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidContext: return "InvalidContext";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NegativeSpectrum: return "NegativeSpectrum";
    case ErrorCode::DimensionOrder: return "DimensionOrder";
    case ErrorCode::NotAProjection: return "NotAProjection";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::InfeasibleOverlap: return "InfeasibleOverlap";
    case ErrorCode::InfeasibleCover: return "InfeasibleCover";
    case ErrorCode::InfeasibleFamily: return "InfeasibleFamily";
    case ErrorCode::NotBalanced: return "NotBalanced";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::OracleMiss: return "OracleMiss";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::UnclassifiableSummand: return "UnclassifiableSummand";
    case ErrorCode::CenterComputationFailure: return "CenterComputationFailure";
    case ErrorCode::DegenerateAnchor: return "DegenerateAnchor";
    case ErrorCode::NonIsometricAssembly: return "NonIsometricAssembly";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace wigner
