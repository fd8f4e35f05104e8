#pragma once

#include <stdexcept>
#include <string>

namespace mtasep {

/// Malformed user input (configuration text, population lists, flags).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration would exceed the configured state bound.
class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A counter was raised past the truncation dimension.
class TruncationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural invariant the algorithms rely on was violated.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mtasep
