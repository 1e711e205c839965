#pragma once

#include <stdexcept>
#include <string>

namespace pemsim {

// Invalid configuration or input file content.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Physically infeasible state detected while evaluating the model
// (starvation, infeasible humidity, non-finite derivative, ...).
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Integrator could not continue (step-size underflow, divergence).
// Carries the time of failure so callers can preserve partial output.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& msg, double t_fail)
        : std::runtime_error(msg), t_fail_(t_fail) {}
    double failure_time() const { return t_fail_; }

private:
    double t_fail_;
};

} // namespace pemsim
