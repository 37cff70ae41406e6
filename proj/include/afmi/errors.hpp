#pragma once

#include <stdexcept>
#include <string>

namespace afmi {

// Base of every error raised by the library. The CLI maps ConfigError to
// exit status 2 and everything else to 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite or out-of-range input (negative densities, NaN parameters).
class DomainError : public Error {
public:
    using Error::Error;
};

// An operation was called outside its documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Geometry or parameter combination for which a quantity does not exist.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// A root locator was given a bracket without the required sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

// Adaptive step size collapsed below the underflow threshold.
class IntegrationError : public Error {
public:
    using Error::Error;
};

// SVG layout could not be produced (degenerate axis range, empty data).
class LayoutError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace afmi
