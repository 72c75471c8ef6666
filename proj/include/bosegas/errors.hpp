#pragma once

#include <stdexcept>
#include <string>

// Exception hierarchy. The three mid-level families map onto the CLI exit
// codes: ConfigError -> 2 (bad input/validation), NumericalError -> 3
// (algorithm failed to converge or left its domain of validity),
// IoError -> 4 (filesystem trouble).
namespace bosegas {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

// --- validation / domain-of-definition errors ---
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};
struct ValidationError : ConfigError {
  using ConfigError::ConfigError;
};
struct InvalidPotential : ConfigError {
  using ConfigError::ConfigError;
};
struct UnsupportedKind : ConfigError {
  using ConfigError::ConfigError;
};
struct GeometryError : ConfigError {
  using ConfigError::ConfigError;
};
struct NormalizationError : ConfigError {
  using ConfigError::ConfigError;
};
struct DomainError : ConfigError {
  using ConfigError::ConfigError;
};
struct ZeroMomentum : ConfigError {
  using ConfigError::ConfigError;
};
struct ThresholdTooLarge : ConfigError {
  using ConfigError::ConfigError;
};
struct BudgetExceeded : ConfigError {
  using ConfigError::ConfigError;
};

// --- numerical failures ---
struct NonConvergence : NumericalError {
  using NumericalError::NumericalError;
};
struct BracketFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct QuadratureFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct EigensolveFailure : NumericalError {
  using NumericalError::NumericalError;
};
struct DivergentEnergy : NumericalError {
  using NumericalError::NumericalError;
};
struct ConfinementError : NumericalError {
  using NumericalError::NumericalError;
};
struct UnstableForm : NumericalError {
  using NumericalError::NumericalError;
};
struct TruncationWarning : NumericalError {
  using NumericalError::NumericalError;
};
struct IdentityViolation : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace bosegas
