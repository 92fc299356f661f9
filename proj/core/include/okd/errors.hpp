#pragma once

#include <stdexcept>
#include <string>

namespace okd {

/// Argument outside the documented range of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature or optimizer failed to reach its tolerance within budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite intermediate value (NaN/inf) produced by an integrand or
/// a closed form that should have stayed finite.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace okd
