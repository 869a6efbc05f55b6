#pragma once

#include <stdexcept>
#include <string>

namespace qkm {

// Process exit codes used by the CLI. Each error class below maps to one.
enum class ExitCode : int {
    ok = 0,
    failure = 1,
    config = 2,
    singular = 3,
    nonconvergence = 4,
};

// Invalid arguments, dimension mismatches, malformed configs.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A linear system that cannot be solved to the required residual.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, double smallest_eigenvalue)
        : std::runtime_error(what), smallest_eigenvalue_(smallest_eigenvalue) {}

    double smallest_eigenvalue() const { return smallest_eigenvalue_; }

private:
    double smallest_eigenvalue_;
};

// An iterative solver that hit its iteration cap.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double max_violation)
        : std::runtime_error(what), max_violation_(max_violation) {}

    double max_violation() const { return max_violation_; }

private:
    double max_violation_;
};

} // namespace qkm
