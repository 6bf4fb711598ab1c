/*
 * error.hpp: exception types shared by every backscatter module.
 *
 * Each error carries a category so the command-line front end can map
 * failures onto stable exit codes without string matching.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace backscatter {

enum class ErrorKind {
    InvalidParameter,  // out-of-domain physical input
    Inconsistency,     // inputs contradict each other (frequency closure, ...)
    Config,            // malformed or incomplete configuration
    Singularity,       // vanishing denominator in a closed form
    DegenerateSteadyState,
    Integrator,        // explicit integrator blew up
    Refinement,        // grid too coarse for the requested quadrature
    Dispersion,        // non-finite dispersion slope
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for errors caused by user input rather than numerics.
    bool is_validation() const noexcept {
        return kind_ == ErrorKind::InvalidParameter || kind_ == ErrorKind::Inconsistency ||
               kind_ == ErrorKind::Config;
    }

private:
    ErrorKind kind_;
};

class DegenerateSteadyStateError : public Error {
public:
    DegenerateSteadyStateError(int null_dimension, const std::string& what)
        : Error(ErrorKind::DegenerateSteadyState, what), null_dimension_(null_dimension) {}

    int null_dimension() const noexcept { return null_dimension_; }

private:
    int null_dimension_;
};

namespace detail {

inline void require_positive(double value, const char* name) {
    if (!(value > 0.0))
        throw Error(ErrorKind::InvalidParameter,
                    std::string(name) + " must be positive (got " + std::to_string(value) + ")");
}

inline void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0))
        throw Error(ErrorKind::InvalidParameter,
                    std::string(name) + " must be non-negative (got " + std::to_string(value) + ")");
}

}  // namespace detail
}  // namespace backscatter
