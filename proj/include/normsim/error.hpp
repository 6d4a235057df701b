#pragma once

#include <stdexcept>
#include <string>

namespace normsim {

// A parameter lies outside its admissible domain (bad K, rho, weights, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The request is well-formed but exceeds what the engine supports, e.g. a
// landscape too large for exhaustive enumeration.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration text or unknown keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace normsim
