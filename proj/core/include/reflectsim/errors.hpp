#pragma once

#include <stdexcept>
#include <string>

namespace reflectsim {

// Malformed or invariant-violating configuration input. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A search was asked to enumerate more candidates than its configured cap
// allows. CLI exit code 3.
class BudgetExceededError : public std::runtime_error {
public:
    explicit BudgetExceededError(const std::string& msg) : std::runtime_error(msg) {}
};

// The closed-form capacity bound has a non-positive denominator for the
// given parameters; the bound is vacuous and carries no numeric value.
class BoundInvalidError : public std::runtime_error {
public:
    explicit BoundInvalidError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace reflectsim
