#pragma once

#include <cmath>
#include <numbers>

#include "dickesim/errors.hpp"

namespace dicke {

// Parameters of the driven two-mode quadratic model
//   H(t) = omega_a a^dag a + omega_b(t) b^dag b + g (a + a^dag)(b + b^dag),
//   omega_b(t) = omega_0 + lambda * sin(eta * t).
// All rates are in units of omega_a unless stated otherwise.
struct SystemParams {
    double omega_a = 1.0;   // cavity frequency
    double omega_0 = 1.0;   // mean atomic frequency
    double lambda = 0.0;    // modulation amplitude of omega_b(t)
    double eta = 1.0;       // modulation frequency
    double g = 0.0;         // collective coupling
    double gamma0 = 0.0;    // cavity amplitude damping rate
    double n_atoms = 1e6;   // ensemble size, used only for validity checks
    double tau0 = 1.0;      // microscopic relaxation-time scale

    double period() const { return 2.0 * std::numbers::pi / eta; }

    // Throws ConfigError on out-of-domain values.
    void validate() const {
        if (!(omega_a > 0.0)) throw ConfigError("omega_a must be > 0");
        if (!(omega_0 > 0.0)) throw ConfigError("omega_0 must be > 0");
        if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
        if (lambda >= omega_0)
            throw ConfigError("lambda must be < omega_0 (omega_b(t) must stay positive)");
        if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
        if (!(g >= 0.0)) throw ConfigError("g must be >= 0");
        if (!(gamma0 >= 0.0)) throw ConfigError("gamma0 must be >= 0");
        if (!(n_atoms >= 1.0)) throw ConfigError("n_atoms must be >= 1");
        if (!(tau0 > 0.0)) throw ConfigError("tau0 must be > 0");
        if (!std::isfinite(omega_a) || !std::isfinite(omega_0) ||
            !std::isfinite(lambda) || !std::isfinite(eta) ||
            !std::isfinite(g) || !std::isfinite(gamma0) ||
            !std::isfinite(n_atoms) || !std::isfinite(tau0))
            throw ConfigError("parameters must be finite");
    }
};

}  // namespace dicke
