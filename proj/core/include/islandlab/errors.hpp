#pragma once

#include <stdexcept>
#include <string>

namespace islandlab {

/// Base class for all islandlab runtime failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Effective top and bottom boundaries touch or cross on the audit grid.
struct BoundaryCrossing : Error {
  using Error::Error;
};

struct InvalidResolution : Error {
  using Error::Error;
};

/// Linear solve failed or did not meet the residual contract.
struct SingularSystem : Error {
  using Error::Error;
};

/// Newton iteration stalled; message carries the residual history.
struct NewtonDiverged : Error {
  using Error::Error;
};

/// inf F' over the iterate range dropped to -lambda1 or below.
struct StabilityViolated : Error {
  using Error::Error;
};

struct NoStagnation : Error {
  using Error::Error;
};

struct GridMismatch : Error {
  using Error::Error;
};

/// No root of the vertical derivative inside the streamline window.
struct WindowExit : Error {
  using Error::Error;
};

/// Picard iteration contraction factor above the admissible bound.
struct NotContracting : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct DegenerateHessian : Error {
  using Error::Error;
};

struct AssertionFailed : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace islandlab
