#pragma once

#include <stdexcept>
#include <string>

namespace qreading {

// Argument outside the mathematical domain of an operation (probability
// outside [0,1], negative photon number, degenerate cell where a threshold
// is requested, ...). Caller error.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operands live on incompatible spaces or an index is out of range.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced a value that violates a physical invariant
// (negative spectrum, cross-check mismatch). Indicates a numerical or
// logic failure rather than bad input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The Fock truncation is too small for the requested state.
class CutoffError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qreading
