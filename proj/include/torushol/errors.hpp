#pragma once

#include <stdexcept>
#include <string>

namespace torushol {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An evaluation or integration point came closer to the singular locus
/// than the configured exclusion radius. The caller must reroute the path.
class PoleProximity : public Error {
 public:
  using Error::Error;
};

/// rho > 0 together with theta_shift in (1/2)(Z + iZ): the off-diagonal
/// line bundles are trivial and the family has no simple-pole representative.
class DegenerateBundle : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not meet the requested tolerance.
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

class PathError : public Error {
 public:
  using Error::Error;
};

class NotRealTraces : public Error {
 public:
  using Error::Error;
};

class ReducibleInput : public Error {
 public:
  using Error::Error;
};

/// Two supposedly equivalent computations disagree beyond tolerance;
/// signals numerical breakdown rather than a caller mistake.
class Inconsistent : public Error {
 public:
  using Error::Error;
};

class InvalidCharacter : public Error {
 public:
  using Error::Error;
};

/// A subgroup word evaluated away from {+Id, -Id}.
class NotCentral : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Converged trace had real part >= -2 where the solved branch requires < -2.
class HyperbolicityViolated : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace torushol
