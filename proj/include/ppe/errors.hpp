#pragma once

#include <stdexcept>
#include <string>

namespace ppe {

// Requested size exceeds a memory or enumeration guard.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical input violates a physical invariant (non-unitary gate,
// negative eigenvalue beyond noise, ...).
class InvariantError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ppe
