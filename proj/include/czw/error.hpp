#pragma once

#include <stdexcept>
#include <string>

namespace czw {

// Base for every error raised by the workbench.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (negative t, rho <= 1 ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid tuning/configuration value (tolerance <= 0, empty sweep, bad JSON field).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A stated hypothesis of an operation does not hold for the given input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Dyadic generation deeper than the grid resolution.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Two grid functions that must share a grid do not.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

// Numerical estimation did not settle (power iteration, root bracketing).
class EstimationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace czw
