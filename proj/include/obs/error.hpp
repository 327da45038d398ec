#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace obs {

// Malformed parameters or inputs (m = 0, p outside (0,1), bad certificate text...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured node or pivot budget was exhausted. This never means "disproved".
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::uint64_t used)
        : std::runtime_error(what + " (budget exhausted after " + std::to_string(used) + ")"), used_(used) {}
    std::uint64_t used() const { return used_; }

private:
    std::uint64_t used_;
};

}  // namespace obs
