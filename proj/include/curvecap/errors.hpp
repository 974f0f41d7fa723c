#pragma once

#include <stdexcept>
#include <string>

namespace curvecap {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: unparsable polynomials, malformed specs, empty varieties,
// ideals that do not cut out a curve, point files that fail validation.
class input_error : public error {
public:
    explicit input_error(const std::string& msg) : error(msg) {}
};

// The curve fails one of the structural hypotheses the theory needs
// (pure-power leading terms, identity multiplication by z1, simple
// eigenvalues, coordinatewise distinct points at infinity).
class hypothesis_error : public error {
public:
    explicit hypothesis_error(const std::string& msg) : error(msg) {}
};

// A floating-point kernel failed its contract: eigen non-convergence,
// rank-deficient least squares, overflow.
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

// A condition that is impossible when the preconditions hold; indicates a
// bug or a violated assumption upstream.
class internal_error : public error {
public:
    explicit internal_error(const std::string& msg) : error(msg) {}
};

} // namespace curvecap
