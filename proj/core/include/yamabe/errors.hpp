#pragma once

#include <stdexcept>
#include <string>

namespace yamabe {

// Invalid input: bad manifold parameters, nonpositive conformal factors,
// mismatched grids.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Linearization is (numerically) singular at the requested point.
class SingularError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace yamabe
