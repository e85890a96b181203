#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bubble {

/// Invalid configuration: bad discretization sizes, violated physical
/// preconditions, malformed input files. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Enthalpy argument outside (eta_min, eta_max).
class RangeError : public DomainError {
public:
    RangeError(const std::string& what, double lo, double hi)
        : DomainError(what), lo_(lo), hi_(hi) {}
    double lower() const noexcept { return lo_; }
    double upper() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

/// Resolvent requested at (or within tolerance of) a Legendre eigenvalue.
class SingularOperatorError : public DomainError {
public:
    SingularOperatorError(const std::string& what, int mode) : DomainError(what), mode_(mode) {}
    int nearest_mode() const noexcept { return mode_; }

private:
    int mode_;
};

/// A residual evaluation was requested outside the admissible state set.
class StateInvalidError : public std::runtime_error {
public:
    StateInvalidError(const std::string& what, std::string margin, double value)
        : std::runtime_error(what), margin_(std::move(margin)), value_(value) {}
    const std::string& margin() const noexcept { return margin_; }
    double value() const noexcept { return value_; }

private:
    std::string margin_;
    double value_;
};

/// Newton or continuation failure. Carries the residual-norm trace.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> trace = {})
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

/// Discrete self-consistency check failed (resolution alarm).
class InconsistencyError : public std::runtime_error {
public:
    InconsistencyError(const std::string& what, double distance)
        : std::runtime_error(what), distance_(distance) {}
    double distance() const noexcept { return distance_; }

private:
    double distance_;
};

} // namespace bubble
