#pragma once

#include <stdexcept>
#include <string>

namespace gyrostat {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or inputs (non-positive inertia, bad shapes, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or a failed implicit solve inside a time step.
class StepFailure : public Error {
public:
    using Error::Error;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual, int iterations)
        : Error(what), last_residual_(last_residual), iterations_(iterations) {}

    double last_residual() const { return last_residual_; }
    int iterations() const { return iterations_; }

private:
    double last_residual_;
    int iterations_;
};

/// Newton system without full column rank.
class SingularJacobianError : public Error {
public:
    SingularJacobianError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}

    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

}  // namespace gyrostat
