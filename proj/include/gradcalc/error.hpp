#pragma once

#include <stdexcept>
#include <string>

namespace gradcalc {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different charts.
class ChartMismatch : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition (bad variable index,
/// invalid grading component, incomplete substitution, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Tensor valence or symmetry does not fit the operation.
class ValenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace gradcalc
