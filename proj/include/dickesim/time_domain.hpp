#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dickesim/damping.hpp"
#include "dickesim/params.hpp"

namespace dicke {

// Gaussian state of the two-mode system, stored as the unsymmetrized
// second-moment matrix S_ij = <u_i u_j> with u = (a, b, a^dag, b^dag).
struct GaussianState {
    Eigen::Matrix4cd moments = Eigen::Matrix4cd::Zero();
    double t = 0.0;

    double occupation_a() const { return moments(2, 0).real(); }
    double occupation_b() const { return moments(3, 1).real(); }

    // Max deviation of S - S^T from the canonical commutator matrix.
    double commutator_deviation() const;
};

// Bare vacuum: <a a^dag> = <b b^dag> = 1, everything else zero.
Eigen::Matrix4cd vacuum_moments();

// Bogoliubov decomposition of the undriven drift M0 into damped polariton
// modes. Columns of V are the (+eps_plus, +eps_minus) eigenvectors and
// their particle-hole conjugates, normalized symplectically so that
// V^T J V = J.
struct DressedDecomposition {
    Eigen::Matrix4cd V;
    Eigen::Matrix4cd Vinv;
    double gamma_plus = 0.0;    // damping rate inherited by the upper branch
    double gamma_minus = 0.0;   // damping rate inherited by the lower branch
    Eigen::Matrix4cd damping;   // bare-frame drift contribution -Lambda
    Eigen::Matrix4cd diffusion; // bare-frame noise matrix D
};

// Each polariton inherits gamma_k = gamma0 (V^-1)_{k,a} V_{a,k} from the
// cavity bath; damping acts on the dressed modes (secular form), which is
// the weak-coupling limit consistent with a strictly one-sided bath.
DressedDecomposition dressed_decomposition(const SystemParams& p,
                                           const DampingModel& d);

// Stationary state of the undriven damped system: dressed-mode vacuum,
// which retains the virtual bare-mode population of the ground state.
Eigen::Matrix4cd dressed_vacuum_moments(const SystemParams& p,
                                        const DampingModel& d);

struct Trajectory {
    std::vector<GaussianState> states;
    int samples_per_cycle = 0;
};

// Integrate dS/dt = Z(t) S + S Z(t)^T + D from the bare vacuum with
// Z(t) = -i M(t) - Lambda, sampling uniformly within each drive cycle.
// Adaptive RK with per-step tolerance `tol`; a step size forced below
// 1e-12 raises StiffnessFailure.
Trajectory evolve(const SystemParams& p, const DampingModel& d,
                  double t_final, double tol = 1e-10,
                  int samples_per_cycle = 64);

struct CycleAverage {
    double nbar = 0.0;           // cycle-averaged <a^dag a>
    double flux_estimate = 0.0;  // 2 gamma0 nbar
    int cycles_used = 0;
    double t_converged = 0.0;
};

// Cycle averages of <a^dag a> approach their limit geometrically (the
// moment flow is linear). After discarding 5/gamma0 of transient, the
// sequence is Aitken-extrapolated; the extrapolated value is returned
// once its estimated residual is below 1e-4 and two successive
// extrapolants agree to 1e-5. Gives up (NotConverged) past 50/gamma0.
CycleAverage steady_cycle_average(const SystemParams& p,
                                  const DampingModel& d, double tol = 1e-10,
                                  int samples_per_cycle = 64);

}  // namespace dicke
