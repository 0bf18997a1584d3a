#pragma once

#include <stdexcept>
#include <string>

namespace sharpbmo {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point or argument lies outside the set where a function is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An inverse was asked for a value outside the attained range.
class RangeError : public DomainError {
 public:
  RangeError(const std::string& what, double lo, double hi)
      : DomainError(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

// Exponent pair or tolerance settings are not admissible.
class ParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Quadrature or a root search did not reach the requested accuracy.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A consistency check that should never fire did fire.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sharpbmo
