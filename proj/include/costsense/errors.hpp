#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace costsense {

// Root of every error the library throws. Each subclass maps to one failure
// category so callers (the CLI in particular) can pick an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree (matmul inner dims, broadcast, conv input length).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid hyperparameter or option (dropout rate, pool length, gamma, preset).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data violates a precondition (zero class count, single-class split,
// duplicate text, empty corpus).
class DataError : public Error {
 public:
  using Error::Error;
};

// Caller broke an API contract (non-scalar loss, length mismatch, empty matrix).
class ContractError : public Error {
 public:
  using Error::Error;
};

// A NaN or Inf reached an op boundary.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Token id outside the vocabulary.
class EncodingError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Checkpoint load failures. All derive from LoadError so a caller can catch
// the family, while tests can assert the exact kind.
class LoadError : public DataError {
 public:
  using DataError::DataError;
};

class FormatError : public LoadError {
 public:
  using LoadError::LoadError;
};

class VersionError : public LoadError {
 public:
  using LoadError::LoadError;
};

class TruncatedBlobError : public LoadError {
 public:
  using LoadError::LoadError;
};

class ShapeMismatchError : public LoadError {
 public:
  using LoadError::LoadError;
};

}  // namespace costsense
