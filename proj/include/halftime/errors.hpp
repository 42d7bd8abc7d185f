#pragma once

#include <stdexcept>
#include <string>

namespace halftime {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unsupported variant, malformed matrix or code, unknown coefficient.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Caller violated a shape precondition (odd NH input, wrong block count, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Seed buffer too small for the requested input length.
class SizingError : public Error {
 public:
  using Error::Error;
};

// An algebraic property check failed (singular column subset, short code distance).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace halftime
