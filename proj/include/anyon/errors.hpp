#pragma once

#include <stdexcept>
#include <string>

namespace anyon {

// Two fields live on different grids, or an array has the wrong length.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operation was called outside its domain (zero field, singular point, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input violates a documented precondition (normalization, sign, size budget).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An iterative method did not reach its target.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration text could not be turned into a valid RunConfig.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace anyon
