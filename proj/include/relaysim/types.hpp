#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace relaysim {

using cdouble = std::complex<double>;

/// Invalid configuration values (file, CLI, or programmatic).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a relay-only schedule has no eligible link left.
class StallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relaysim
