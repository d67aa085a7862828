#pragma once

#include <stdexcept>
#include <string>

namespace capillary {

/// Base class for all failures raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A curvature function was evaluated outside its admissible cone.
class NonAdmissibleError : public Error {
public:
  using Error::Error;
};

/// The Newton linearization could not be solved, even with the diagonal shift.
class SingularLinearizationError : public Error {
public:
  using Error::Error;
};

/// Newton ran out of iterations (or the line search stalled) before the
/// residual dropped below the requested tolerance.
class NoConvergenceError : public Error {
public:
  using Error::Error;
};

/// An iterate left the strictly convex regime and step shortening could not
/// bring it back above the configured eigenvalue floor.
class ConvexityLostError : public Error {
public:
  using Error::Error;
};

/// Two objects that must share discretization parameters do not.
class ParameterMismatchError : public Error {
public:
  using Error::Error;
};

} // namespace capillary
