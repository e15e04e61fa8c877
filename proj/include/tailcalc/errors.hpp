#pragma once

#include <stdexcept>
#include <string>

namespace tailcalc {

// Error taxonomy mirrors the CLI exit codes: config errors exit 1,
// precondition violations exit 2, numeric failures exit 3.

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tailcalc
