#pragma once

#include <stdexcept>
#include <string>

namespace finsec {

/// Malformed input: bad element literal, wrong group kind, schema violation.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two values from different group contexts were combined.
class ContextMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A desk-scale bound (ball size, matrix dimension, search radius) was hit.
class CapacityExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace finsec
