// errors.hpp - error categories mapped to CLI exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

// Bad or inconsistent user configuration (CLI exit 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A solver or fit failed to produce a usable result (CLI exit 3).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// File could not be read, parsed or written (CLI exit 4).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinbath
