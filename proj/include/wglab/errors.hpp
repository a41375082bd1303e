#pragma once

#include <stdexcept>
#include <string>

namespace wglab {

// Thrown when an input exceeds a configured cap (table size, refinement
// budget) rather than being malformed.
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when an iterative numerical procedure fails to converge; carries
// a diagnostics string assembled by the caller.
class numerical_failure : public std::runtime_error {
public:
    explicit numerical_failure(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace wglab
