#pragma once

#include <stdexcept>
#include <string>

namespace wproc {

/// Base class for every failure this library raises.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not compose (or ambient dimensions disagree).
struct ShapeError : Error {
  using Error::Error;
};

/// Non-finite input or an SVD/eigen iteration that did not converge.
struct NumericsError : Error {
  using Error::Error;
};

/// Input rejected by the PsdMatrix hermiticity check.
struct NotHermitianError : Error {
  using Error::Error;
};

/// Input rejected by the PsdMatrix positivity check.
struct NotPsdError : Error {
  using Error::Error;
};

/// The two subspaces handed to oblique_projection do not split the space.
struct NotDirectSumError : Error {
  using Error::Error;
};

/// The canonical compatible-projection complement failed to complete a direct
/// sum within tolerance (tolerance breakdown, not a mathematical failure).
struct DecompositionFailedError : Error {
  using Error::Error;
};

/// douglas_factor precondition R(Z) subset of R(Y) does not hold.
struct RangeNotIncludedError : Error {
  using Error::Error;
};

/// projection_family_value received a projection whose nullspace is not S.
struct NullspaceMismatchError : Error {
  using Error::Error;
};

/// A tolerance-checked solvability condition failed (numerical breakdown;
/// the condition always holds exactly at finite dimension).
struct ConditionFailedError : Error {
  using Error::Error;
};

/// Matrix file could not be parsed.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace wproc
