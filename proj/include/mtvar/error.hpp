#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: expression text, problem files, CSV files, dimensions.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An expression was evaluated outside its domain (ln of a non-positive
/// value, division by zero, ...).
class DomainViolation : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold for the data
/// (infeasible candidate, non-positive denominator, stationarity failure).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtvar
