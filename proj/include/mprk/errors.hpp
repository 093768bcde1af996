#pragma once

#include <stdexcept>
#include <string>

namespace mprk {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two containers that must agree in length do not.
struct LengthMismatch : Error {
  using Error::Error;
};

/// A dimension parameter is below the minimum the operation supports.
struct DimensionTooSmall : Error {
  using Error::Error;
};

/// A dense solve hit a pivot too small to divide by.
struct SingularSystem : Error {
  using Error::Error;
};

/// The closed-form midpoint amplification factor (z+2)/(2-z) at z == 2.
struct PoleAtTwo : Error {
  using Error::Error;
};

/// A value does not fit the binary32 range and would round to infinity.
struct OverflowToInfinity : Error {
  using Error::Error;
};

/// A diagonal entry of the factored operator is exactly zero, so its
/// inverse cannot be formed.
struct ZeroEigenvalueSum : Error {
  using Error::Error;
};

/// An operation received the wrong equation kind (e.g. an analytic
/// solution requested for a problem that has none).
struct WrongEquation : Error {
  using Error::Error;
};

/// A state vector picked up a NaN or infinity during time integration.
struct NonFiniteState : Error {
  using Error::Error;
};

/// An iterative procedure exhausted its iteration budget (test oracles).
struct ConvergenceFailure : Error {
  using Error::Error;
};

}  // namespace mprk
