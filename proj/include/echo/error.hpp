#pragma once

#include <stdexcept>
#include <string>

namespace echo {

/// Invalid parameter. `key()` names the offending setting.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Fear/desire requested for a conflict in which nothing would change hands.
class DegenerateConflict : public std::domain_error {
public:
    DegenerateConflict() : std::domain_error("degenerate conflict: both transfers are zero") {}
};

}  // namespace echo
