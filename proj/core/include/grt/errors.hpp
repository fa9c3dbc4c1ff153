#pragma once

#include <stdexcept>
#include <string>

namespace grt {

/// Invalid or inconsistent user configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written, or has the wrong layout.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A modelling assumption fails at the requested point.
class ModelViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grt
