#pragma once

#include <stdexcept>
#include <string>

namespace stcl {

// Bad input data: model invariants violated, unparseable config, pole
// arguments. Maps to exit code / status 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical contract failed at runtime: non-convergent quadrature,
// inconsistent linear system, broken conservation law. Maps to status 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stcl
