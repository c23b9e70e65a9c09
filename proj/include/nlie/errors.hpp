#pragma once

#include <stdexcept>
#include <string>

namespace nlie {

/// Operands live in spaces of different dimension (or have the wrong arity).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called on input that violates its stated precondition.
class PreconditionFailed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual input (rational strings, algebra files, CLI vectors).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlie
