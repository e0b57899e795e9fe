#pragma once

#include <stdexcept>
#include <string>

namespace llgss {

/// Invalid parameters or arguments outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integration or extraction could not reach the requested accuracy/budget.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation requested outside the range covered by a trace.
class RangeError : public std::out_of_range {
 public:
  RangeError(const std::string& what, double required_x_max)
      : std::out_of_range(what), required_x_max_(required_x_max) {}
  double required_x_max() const { return required_x_max_; }

 private:
  double required_x_max_;
};

}  // namespace llgss
