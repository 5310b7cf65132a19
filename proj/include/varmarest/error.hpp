#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace varmarest {

enum class ErrorKind {
  DimensionMismatch,
  NotStable,
  NotStationary,
  StrategyDimensionMismatch,
  Infeasible,
  SizeMismatch,
  NonFinite,
  RankOutOfRange,
  DomainError,
  LagOutOfRange,
  SingularBlockMatrix,
  RankDeficientM,
  NotPureVar,
  PerturbedModelUnstable,
  SingularUpsilon,
  PreliminaryFailed,
  SingularRegressorMatrix,
  BadCovariance,
  ReplicationFailed,
  ShockIndexOutOfRange,
  ConfigError,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotStable: return "NotStable";
    case ErrorKind::NotStationary: return "NotStationary";
    case ErrorKind::StrategyDimensionMismatch: return "StrategyDimensionMismatch";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::RankOutOfRange: return "RankOutOfRange";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::LagOutOfRange: return "LagOutOfRange";
    case ErrorKind::SingularBlockMatrix: return "SingularBlockMatrix";
    case ErrorKind::RankDeficientM: return "RankDeficientM";
    case ErrorKind::NotPureVar: return "NotPureVar";
    case ErrorKind::PerturbedModelUnstable: return "PerturbedModelUnstable";
    case ErrorKind::SingularUpsilon: return "SingularUpsilon";
    case ErrorKind::PreliminaryFailed: return "PreliminaryFailed";
    case ErrorKind::SingularRegressorMatrix: return "SingularRegressorMatrix";
    case ErrorKind::BadCovariance: return "BadCovariance";
    case ErrorKind::ReplicationFailed: return "ReplicationFailed";
    case ErrorKind::ShockIndexOutOfRange: return "ShockIndexOutOfRange";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Library exception. `what()` starts with the kind name so that command
/// line diagnostics stay greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace varmarest
