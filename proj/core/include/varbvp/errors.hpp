#pragma once

#include <stdexcept>
#include <string>

namespace varbvp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point (q, v) lies outside the model's declared domain, or is not finite.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// ∂²L/∂v² (or the solver's linearization) is singular or too badly conditioned.
class NonRegularLagrangian : public Error {
 public:
  using Error::Error;
};

/// An iterative solve ran out of iterations, bisections or bounds.
class NewtonDiverged : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Curves on different grids or of different dimension were combined.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace varbvp
