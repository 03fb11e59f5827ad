#pragma once

#include <stdexcept>
#include <string>

namespace radrisk {

// Exit codes used by the CLI; library code throws the matching exception type.
inline constexpr int exit_config_error = 2;
inline constexpr int exit_data_error = 3;
inline constexpr int exit_numeric_error = 4;

// Bad flags, malformed config files, inconsistent model definitions.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or invalid input data (CSV contents, tables, cohorts).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures: non-PSD covariance, degenerate fits, sampler breakdown.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace radrisk
