// errors.hpp — error categories mapped to CLI exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace revivals {

// Bad user input: malformed scenario files, out-of-range parameters.
// The CLI maps these (and std::invalid_argument) to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numeric or validation failure during a computation (non-convergence,
// unstable step, cross-solver gate violation). CLI exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace revivals
