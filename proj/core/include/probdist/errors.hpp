#pragma once

#include <stdexcept>
#include <string>

namespace probdist {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live in spaces of different dimension.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The exact transport solver could not certify its answer.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace probdist
