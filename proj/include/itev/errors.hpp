#pragma once

#include <stdexcept>
#include <string>

namespace itev {

// Bad user input: rejected preconditions, malformed files, out-of-range
// parameters.  The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to converge or lost validity (step underflow,
// quadrature refinement exhausted, stagnating root polish).  Exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace itev
