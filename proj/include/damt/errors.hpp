#pragma once

#include <stdexcept>
#include <string>

namespace damt {

// Error classes map onto the CLI exit codes: ConfigError -> 1, DataError -> 2,
// anything else -> 3.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace damt
