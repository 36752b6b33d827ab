#pragma once

#include <Eigen/Dense>
#include <complex>

#include "dickesim/damping.hpp"
#include "dickesim/params.hpp"

namespace dicke {

// Mode-operator ordering used throughout: u = (a, b, a^dag, b^dag),
// component indices 0..3.
enum ModeComponent : int { kA = 0, kB = 1, kAdag = 2, kBdag = 3 };

// Drift matrix of the undriven quadratic Hamiltonian, d u/dt = -i M0 u.
Eigen::Matrix4cd build_m0(const SystemParams& p);

// Modulation matrix: omega_b(t) = omega_0 + lambda sin(eta t) contributes
// lambda * sin(eta t) * M1 to the drift, M1 = diag(0, lambda, 0, -lambda)/lambda
// scaled by lambda here, i.e. diag(0, lambda, 0, -lambda).
Eigen::Matrix4cd build_m1(const SystemParams& p);

struct AssembledSidebands {
    Eigen::MatrixXcd M;  // dimension 4(2m+1)
    double omega = 0.0;
    int m = 0;
};

// Frequency-domain sideband matrix at probe frequency omega with harmonics
// j = -m..m. Diagonal block j is M0 - (omega + j eta) I - i Gamma(omega + j eta);
// sin-modulation couples j to j+1 with -i/2 M1 and to j-1 with +i/2 M1.
AssembledSidebands assemble(const SystemParams& p, const DampingModel& d,
                            double omega, int m);

struct SidebandGreenFunction {
    Eigen::MatrixXcd G;
    double omega = 0.0;
    int m = 0;
    double residual = 0.0;  // || i M G - I ||_max

    // Row/column of harmonic j, component c in {kA, kB, kAdag, kBdag}.
    int index(int j, int c) const { return 4 * (j + m) + c; }

    std::complex<double> at(int j, int c, int jp, int cp) const {
        return G(index(j, c), index(jp, cp));
    }
};

// G = (i M)^{-1} by partial-pivot LU; residual above 1e-10 throws
// SingularMatrix (reachable only when the probe sits on an undamped pole).
SidebandGreenFunction green_function(const AssembledSidebands& am);

}  // namespace dicke
