#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hjdyn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL text. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Numeric evaluation failed: unbound symbol, opaque function, or a value
/// outside the real domain (sqrt of a negative number, division by zero).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Symbolic analysis cannot proceed (rank instability, unsupported velocity
/// inversion, singular input to parametrize, ...).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

/// Consistency iteration produced a constant nonzero constraint.
class ContradictionError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

/// Bad user-supplied configuration: unknown template, invalid parameter,
/// malformed system file, non-monotone parametrization, bad step size.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hjdyn
