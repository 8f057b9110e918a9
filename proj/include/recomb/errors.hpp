#pragma once

#include <stdexcept>
#include <string>

namespace recomb {

// Invalid values or violated invariants in inputs (CLI exit code 2).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid request that exceeds a hard resource bound (CLI exit code 3).
struct FeasibilityError : std::runtime_error {
    explicit FeasibilityError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace recomb
