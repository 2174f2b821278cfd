#pragma once

#include <stdexcept>
#include <string>

namespace kmdesign {

/// Raised when an input violates an operation's preconditions (bad
/// cycle notation, out-of-range points, mismatched degrees, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a configured resource guard (element cap, subset-count
/// guard, memory guard) would be exceeded.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency check failed. Always a bug, never user error.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kmdesign
