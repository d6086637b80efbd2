#pragma once

#include <stdexcept>
#include <string>

namespace superrad {

// Malformed run configuration (unknown key, bad value, conflicting keys).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation could not meet its accuracy or validity contract.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace superrad
