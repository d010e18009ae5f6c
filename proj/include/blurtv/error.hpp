#pragma once

#include <stdexcept>
#include <string>

namespace blurtv {

/// Invalid argument or precondition violation (CLI exit code 2).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The half-sample split needs at least two points.
class SplitUndefinedError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// File could not be read or parsed (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data parsed but failed validation, e.g. a non-finite value (exit code 3).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not reach its tolerance (CLI exit code 4).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

}  // namespace blurtv
