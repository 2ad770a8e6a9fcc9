#pragma once

#include <stdexcept>
#include <string>

namespace gio {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files, dimension mismatches, datasets that violate an
// operation's size preconditions.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter combinations. Detected before any computation runs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite values produced during optimization (usually lr too large).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace gio
