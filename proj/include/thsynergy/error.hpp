#pragma once

#include <stdexcept>
#include <string>

namespace ths {

/// Base of every error the library raises. The CLI maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or insufficient data: empty datasets, undefined shares (exit code 1).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, schema or data-file content (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A single value failed validation (negative employees, malformed NACE code).
class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace ths
