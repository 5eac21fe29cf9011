#pragma once

#include <stdexcept>
#include <string>

namespace seditor {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: unknown keys, missing fields, out-of-range values.
// The CLI maps this to exit code 2, everything else to 1.
struct ConfigError : Error {
  using Error::Error;
};

// Shape mismatch between tensors, networks or stored arrays.
struct DimensionError : Error {
  using Error::Error;
};

// Non-finite value where a finite one is required.
struct NumericError : Error {
  using Error::Error;
};

// Unreadable, truncated or version-incompatible checkpoint.
struct CheckpointError : Error {
  using Error::Error;
};

// Filesystem failure (cannot open/write a requested path).
struct IoError : Error {
  using Error::Error;
};

}  // namespace seditor
