#pragma once

#include <stdexcept>
#include <string>

namespace ixpg {

/// Malformed or inconsistent input (bad instance, assignment, parameters).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive procedure would exceed its enumeration cap.
class SizeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ixpg
