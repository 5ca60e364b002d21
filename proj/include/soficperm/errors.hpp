#pragma once

#include <stdexcept>
#include <string>

namespace soficperm {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: mismatched degrees, bad JSON, invalid words.
class InputError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Quasi-actions that cannot be brought onto a common tile / auxiliary set.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// A lemma was asked about a partition that does not satisfy its hypothesis.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// A group element was requested outside the finite domain of a quasi-action.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A deterministic family failed both closure conditions on a pair.
class ClosureViolation : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedGroup : public Error {
 public:
  using Error::Error;
};

}  // namespace soficperm
