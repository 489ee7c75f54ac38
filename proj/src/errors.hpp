#pragma once

#include <stdexcept>

namespace hygampdcs {

// Raised when iterates stop being finite.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hygampdcs
