#pragma once

#include <stdexcept>
#include <string>

namespace plr {

// invalid argument to an operation (out-of-range site, bad grid, ...)
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// malformed or inconsistent configuration
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// iterative method failed to converge; index identifies the offending item
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& msg, std::size_t index)
      : std::runtime_error(msg), index(index) {}
  std::size_t index;
};

// finite-size guard tripped: data no longer approximates the half-line operator
struct BoundaryError : std::runtime_error {
  explicit BoundaryError(const std::string& msg) : std::runtime_error(msg) {}
};

// desk-scale resource cap exceeded (dense many-body algebra)
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace plr
