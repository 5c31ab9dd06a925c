#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace keen {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state or argument lies outside the domain of a behavioral function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An inverse was requested for a value outside the function's range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A structural assumption of the model does not hold; `name()` identifies it.
class AssumptionError : public Error {
 public:
  AssumptionError(std::string name, const std::string& what)
      : Error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// A constraint of the negative-debt construction is violated.
class ConstraintError : public Error {
 public:
  ConstraintError(std::string name, double value, const std::string& what)
      : Error(what), name_(std::move(name)), value_(value) {}
  const std::string& name() const noexcept { return name_; }
  double value() const noexcept { return value_; }

 private:
  std::string name_;
  double value_;
};

/// A debt root supplied to the Jacobian no longer solves the equilibrium equation.
class StaleRootError : public Error {
 public:
  using Error::Error;
};

/// Non-finite arithmetic or a blown-up integration.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state; carries the last finite sample.
class BlowUpError : public NumericError {
 public:
  BlowUpError(double t, std::vector<double> last_state, const std::string& what)
      : NumericError(what), t_(t), last_state_(std::move(last_state)) {}
  double time() const noexcept { return t_; }
  const std::vector<double>& last_state() const noexcept { return last_state_; }

 private:
  double t_;
  std::vector<double> last_state_;
};

}  // namespace keen
