#pragma once

#include <stdexcept>
#include <string>

namespace qig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (log of a nonpositive
/// eigenvalue, boundary breach of the simplex, unknown registry name...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A type invariant does not hold for the supplied data.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

namespace tol {
inline constexpr double kConstruct = 1e-12;
inline constexpr double kSolve = 1e-11;
inline constexpr double kUnitary = 1e-11;
inline constexpr double kDeterminant = 1e-10;
inline constexpr double kFaithful = 1e-10;
inline constexpr double kProbability = 1e-12;
}  // namespace tol

}  // namespace qig
