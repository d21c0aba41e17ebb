#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

/// Base class of every error raised by the library.
class VortexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or chart that the surface does not support.
class DomainError : public VortexError {
 public:
  using VortexError::VortexError;
};

/// A transition asked for a chart that does not cover the point.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Evaluation at a logarithmic singularity (coincident points).
class SingularityError : public VortexError {
 public:
  using VortexError::VortexError;
};

/// Two vortices closer than the configured collision threshold.
class CollisionError : public VortexError {
 public:
  CollisionError(const std::string& what, double separation)
      : VortexError(what), separation_(separation) {}
  double separation() const noexcept { return separation_; }

 private:
  double separation_;
};

/// Vortex strengths violate the zero net circulation constraint, or are zero.
class StrengthError : public VortexError {
 public:
  using VortexError::VortexError;
};

/// Adaptive integration could not find an acceptable step.
class StepRejectionOverflow : public VortexError {
 public:
  using VortexError::VortexError;
};

/// Quadrature failed to meet its tolerance.
class ConvergenceError : public VortexError {
 public:
  using VortexError::VortexError;
};

}  // namespace vortex
