#pragma once

#include <stdexcept>
#include <string>

namespace fg {

/// Incompatible unit tags in a magnitude operation.
struct unit_error : std::runtime_error {
    explicit unit_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed scenario/config input (CLI exit code 2).
struct schema_error : std::runtime_error {
    explicit schema_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical guard tripped: trace drift, step-size bound, Hermiticity loss
/// (CLI exit code 3).
struct watchdog_error : std::runtime_error {
    explicit watchdog_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A transition was requested on a computationally stable system without the
/// force flag.
struct stability_error : std::runtime_error {
    explicit stability_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fg
