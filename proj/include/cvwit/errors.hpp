#pragma once

#include <stdexcept>
#include <string>

namespace cvwit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would need Fock levels above the configured cutoff.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Objects built on different cutoffs (or product spaces) were combined.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A product-space object would exceed the configured memory budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied arguments violate an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A witness does not fit inside its box -n*I <= W <= m*I.
class BoxViolation : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A constructed object failed one of its invariants (trace, positivity, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvwit
