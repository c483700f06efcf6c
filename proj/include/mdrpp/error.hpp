#pragma once

#include <stdexcept>
#include <string>

namespace mdrpp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

// Data that parses but breaks a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// No feasible plan/assignment exists under the capacity constraint.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Query on a vehicle whose route is already finished at the given time.
class IdleVehicleError : public Error {
 public:
  IdleVehicleError() : Error("vehicle already idle") {}
};

// Exact oracle hit its enumeration limits.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdrpp
