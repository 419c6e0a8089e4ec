#pragma once

#include <stdexcept>
#include <string>

namespace parhyb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inputs that violate a documented precondition (dimensions, ranges, config).
struct InvalidParams : Error {
  using Error::Error;
};

struct DimensionMismatch : InvalidParams {
  using InvalidParams::InvalidParams;
};

// A set that cannot contain any point (inverted interval, negative radius,
// zero-normal half-space with negative offset).
struct EmptySetError : Error {
  using Error::Error;
};

// An inner iteration failed to reach its tolerance, or a non-finite value
// appeared mid-computation.
struct NumericalFailure : Error {
  using Error::Error;
};

// Identical inputs produced different trajectories across worker counts or
// repetitions.
struct DeterminismViolation : Error {
  using Error::Error;
};

}  // namespace parhyb
