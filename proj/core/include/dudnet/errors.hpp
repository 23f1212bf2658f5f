#pragma once

#include <stdexcept>
#include <string>

namespace dudnet {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An iterative scheme exhausted its budget without meeting its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Evaluation at (or too close to) a pole of a gamma factor.
class PoleError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// No vertical contour separates the two pole families of a Mellin-Barnes
// integrand.
class ContourError : public Error {
 public:
  using Error::Error;
};

// A NetworkConfig invariant does not hold.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A computed probability landed outside [0,1] by more than numerical dust.
class ProbabilityRangeError : public Error {
 public:
  using Error::Error;
};

// Conditional distance law requested for a (case, tier) pair that has none.
class UnsupportedPair : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A per-case rate was requested for a case of probability zero.
class ZeroProbabilityCase : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure in the scenario runner.
class IoError : public Error {
 public:
  using Error::Error;
};

// Scenario file could not be parsed or fails validation.
class ConfigParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dudnet
