#pragma once

#include <stdexcept>

namespace reslab {

// Bad user input: grid sizes, parameters, config files. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Monte Carlo estimation could not be carried out on the given sample.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A runtime invariant of the model was violated.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Floating-point range exceeded (e.g. exp overflow).
class ScalingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Regression-based oracle failed (rank deficiency).
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A truncated series did not reach the requested tail mass.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace reslab
