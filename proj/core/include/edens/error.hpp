#pragma once

#include <stdexcept>
#include <string>

namespace edens {

/// Raised when dyadic refinement cannot meet the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed experiment configuration or input file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edens
