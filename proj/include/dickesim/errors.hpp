#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Base class for all solver and configuration failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid or inconsistent user-supplied parameters / config files.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Coupling reaches or exceeds the critical value somewhere in the cycle,
// so the quadratic (normal-phase) Hamiltonian is not positive definite.
struct PhaseViolation : Error {
    explicit PhaseViolation(const std::string& msg) : Error(msg) {}
};

// Sideband matrix requested with invalid shape (e.g. truncation m < 1).
struct AssemblyError : Error {
    explicit AssemblyError(const std::string& msg) : Error(msg) {}
};

// Linear solve produced an unacceptable residual; the probe frequency sits
// on an undamped pole (possible only with gamma0 = 0).
struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& msg) : Error(msg) {}
};

// Adaptive frequency integration failed to reach the requested tolerance.
struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& msg) : Error(msg) {}
};

// Flux or photon-number integrals require gamma0 > 0: with no damping the
// response has poles on the real frequency axis and the integrals diverge.
struct DegenerateDamping : Error {
    explicit DegenerateDamping(const std::string& msg) : Error(msg) {}
};

// Sideband truncation sweep hit its cap without the observable settling.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

// Adaptive time stepper drove the step size below the hard floor.
struct StiffnessFailure : Error {
    explicit StiffnessFailure(const std::string& msg) : Error(msg) {}
};

// Cycle-averaged occupation failed to settle within the evolution window.
struct NotConverged : Error {
    explicit NotConverged(const std::string& msg) : Error(msg) {}
};

// No crossing of the adiabatic/impulse boundary exists in one drive period.
struct NoFreezeOut : Error {
    explicit NoFreezeOut(const std::string& msg) : Error(msg) {}
};

// Root scan found an odd number of boundary crossings even after refining,
// indicating a tangency or a scan-resolution artifact.
struct OddRootCount : Error {
    explicit OddRootCount(const std::string& msg) : Error(msg) {}
};

// Mode-overlap table too small for the requested accuracy.
struct TruncationError : Error {
    explicit TruncationError(const std::string& msg) : Error(msg) {}
};

}  // namespace dicke
