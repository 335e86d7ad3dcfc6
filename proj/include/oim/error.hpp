#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oim {

// Base of every error thrown by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/state length does not match the instance size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A configuration value is outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Operation called on a configuration it is not defined for.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration refused because the instance is too large.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. line() is 1-based; 0 means "not tied to a line".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Integration produced a non-finite state. step() is the index of the step
// whose result was non-finite (0 for a non-finite initial state).
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t step)
      : Error("non-finite phase encountered at step " + std::to_string(step)),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace oim
