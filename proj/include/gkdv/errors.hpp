#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

// Bad user input: malformed config, unknown keys, out-of-range parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The discretization cannot represent the requested object to the
// required accuracy (domain too small, eigenvalue not isolated, ...).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A run finished but violated a declared tolerance window
// (drift budget, stay time, bracket monotonicity, ...).
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// State is outside the domain where modulation coordinates are defined.
class ChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gkdv
