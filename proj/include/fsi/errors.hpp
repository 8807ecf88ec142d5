#pragma once

#include <stdexcept>
#include <string>

namespace fsi {

// Configuration / input problems. CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures while solving (non-convergence, singular systems,
// density positivity loss). CLI maps these to exit code 1.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// The deformed geometry degenerated: 1 + w at or below the collision floor
// where an evaluation was requested. Callers that can stop cleanly (the window
// driver) catch this and report a collision instead of propagating.
struct DegenerateMapError : SolverError {
    explicit DegenerateMapError(const std::string& what) : SolverError(what) {}
};

// A runtime invariant check failed (negative density beyond tolerance,
// non-finite energy, handoff mismatch). CLI maps these to exit code 3.
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fsi
