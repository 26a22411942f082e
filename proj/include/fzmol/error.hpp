#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fzmol {

enum class ErrorCode {
  NonSmoothPole,
  NonPositiveMetric,
  EvenHarmonic,
  DegenerateCritical,
  MissedRootSuspicion,
  SingularEnergy,
  EmptyLevel,
  InternalSweepMismatch,
  UnsupportedCentralAtom,
  NotAnAtomA,
  NonUnimodular,
  NonIntegralGluing,
  InconsistentLabels,
  OracleMismatch,
  PoleApproach,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonSmoothPole: return "NonSmoothPole";
    case ErrorCode::NonPositiveMetric: return "NonPositiveMetric";
    case ErrorCode::EvenHarmonic: return "EvenHarmonic";
    case ErrorCode::DegenerateCritical: return "DegenerateCritical";
    case ErrorCode::MissedRootSuspicion: return "MissedRootSuspicion";
    case ErrorCode::SingularEnergy: return "SingularEnergy";
    case ErrorCode::EmptyLevel: return "EmptyLevel";
    case ErrorCode::InternalSweepMismatch: return "InternalSweepMismatch";
    case ErrorCode::UnsupportedCentralAtom: return "UnsupportedCentralAtom";
    case ErrorCode::NotAnAtomA: return "NotAnAtomA";
    case ErrorCode::NonUnimodular: return "NonUnimodular";
    case ErrorCode::NonIntegralGluing: return "NonIntegralGluing";
    case ErrorCode::InconsistentLabels: return "InconsistentLabels";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::PoleApproach: return "PoleApproach";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fzmol
