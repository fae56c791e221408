#pragma once

#include <stdexcept>
#include <string>

namespace sbcode {

// Invalid parameters and dimension mismatches throw std::invalid_argument.
// These two cover the remaining error classes the C API distinguishes.

class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sbcode
