#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace capsig {

/// Thrown when an input value or scenario field violates its documented
/// invariant. Carries the offending field/argument name so the CLI can
/// point at the exact key.
class validation_error : public std::invalid_argument {
public:
    validation_error(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Thrown when a computation hits values outside what the model guarantees
/// (non-finite derivative, non-positive simulated value).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when an optional feature is invoked without its configuration.
class not_configured_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Thrown on filesystem failures (missing scenario, unwritable report path).
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace capsig
