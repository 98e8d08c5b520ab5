#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace egs {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold for its inputs.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The ray t -> t*u never reaches the Nehari set (the nonlinear term vanishes).
class DegenerateDirection : public Error {
public:
    using Error::Error;
};

class DegeneratePoint : public Error {
public:
    using Error::Error;
};

class EmptyDomain : public Error {
public:
    using Error::Error;
};

/// Krylov iteration failed to reach the requested residual.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, std::vector<double> residual_history)
        : Error(what), residual_history_(std::move(residual_history)) {}

    const std::vector<double>& residual_history() const noexcept { return residual_history_; }

private:
    std::vector<double> residual_history_;
};

/// Nonlinear iteration gave up. Carries the last (or best) iterate as plain
/// nodal values so callers can inspect or restart from it.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::vector<double> last_iterate)
        : Error(what), last_iterate_(std::move(last_iterate)) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

private:
    std::vector<double> last_iterate_;
};

class Stagnation : public NoConvergence {
public:
    using NoConvergence::NoConvergence;
};

/// Configuration text could not be turned into a valid run configuration.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace egs
