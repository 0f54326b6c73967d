#pragma once

#include <stdexcept>
#include <string>

namespace dagger {

// Bad caller input: unknown node, malformed file, nonexistent edge.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an internal structural invariant does not hold.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dagger
