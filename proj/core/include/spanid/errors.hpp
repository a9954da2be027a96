#ifndef SPANID_ERRORS_HPP_
#define SPANID_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace spanid {

/// Bad usage, malformed config, unknown keys. CLI exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent corpus/checkpoint data. CLI exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric failure during training (NaN/inf loss). CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spanid

#endif  // SPANID_ERRORS_HPP_
