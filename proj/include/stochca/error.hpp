#pragma once

#include <stdexcept>
#include <string>

namespace stochca {

/// Malformed input data: bad shapes, entries outside [0,1], rows that do not
/// sum to one, unparseable files. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the domain of an operation (index out of range,
/// radius shrink, mismatched state counts).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A well-formed request that the operation does not support for the given
/// shape, e.g. binary-only semantics requested for N > 2.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Broken internal invariant. Reaching this is a bug.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stochca
