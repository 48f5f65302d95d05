#pragma once

#include <stdexcept>
#include <string>

namespace uavmac {

// Bad scenario/config input: CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Solver-level failure (infeasible horizon, non-convergence, LP failure):
// CLI maps this to exit code 3.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace uavmac
