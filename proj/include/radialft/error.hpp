#pragma once

#include <stdexcept>
#include <string>

namespace radialft {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// An improper integral or limit failed to converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "divergence"; }
};

/// Quadrature could not reach the requested tolerance.
class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& what, double value, double err_est)
      : Error(what), value_(value), err_est_(err_est) {}
  const char* kind() const noexcept override { return "tolerance"; }
  double value() const noexcept { return value_; }
  double err_est() const noexcept { return err_est_; }

 private:
  double value_;
  double err_est_;
};

/// Malformed profile or command-line text.
class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse"; }
};

/// A hypothesis of the transform formula does not hold for the input.
class ConditionViolation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "condition"; }
};

}  // namespace radialft
