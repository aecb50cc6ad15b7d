#pragma once

#include <stdexcept>
#include <string>

namespace relmine {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data, arguments or configuration. The CLI maps this to exit 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents (header, magic, truncation).
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A caller violated a documented precondition.
class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Failure of the environment rather than the input: unreadable files,
/// unreachable services. The CLI maps this to exit 2.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

}  // namespace relmine
