#pragma once
#include <stdexcept>
#include <string>

namespace prodesc {

// Bad user input: malformed tables, incompatible levels, schema errors.
// The CLI maps this to exit code 1.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural invariant failed (d*d != 0, non-equivariant transition, ...).
// The CLI maps this to exit code 2.
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace prodesc
