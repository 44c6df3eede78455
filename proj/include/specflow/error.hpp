#pragma once

#include <stdexcept>
#include <string>

namespace specflow {

enum class ErrorKind {
  InvalidArgument,        // malformed input
  Precondition,           // a documented precondition does not hold
  InsufficientStructure,  // alpha_action or a membership decision is missing
  PrecisionExhausted,     // certified evaluation hit the bit cap
  DigitsExhausted,        // continued-fraction digits ran out
  NoReturn,               // orbit did not come back to the transversal
  AssertionFailed,        // a verified guarantee was violated
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// Bit cap for certified evaluation. Reads SPECFLOW_PRECISION_CAP once; default 2^16.
unsigned precision_cap_bits();

}  // namespace specflow
