#pragma once

#include "dickesim/params.hpp"

namespace dicke {

// Polariton branch frequencies of the instantaneous quadratic Hamiltonian.
struct NormalModes {
    double eps_minus = 0.0;
    double eps_plus = 0.0;
};

struct GapMinimum {
    double eps_min = 0.0;  // smallest lower-branch frequency over one cycle
    double t_min = 0.0;    // time (mod period) where it is attained
};

struct HpValidity {
    bool ok = true;
    double ratio = 0.0;  // excitation number over ensemble size
};

// Instantaneous atomic frequency omega_0 + lambda sin(eta t).
double omega_b(const SystemParams& p, double t);

// Instantaneous critical coupling sqrt(omega_a * omega_b(t)) / 2.
double critical_coupling(const SystemParams& p, double t);

// Branch frequencies from
//   2 eps_pm^2 = omega_a^2 + omega_b^2
//                +- sqrt((omega_b^2 - omega_a^2)^2 + 16 g^2 omega_a omega_b).
// Couplings within 1e-12 (relative) of critical return eps_minus = 0
// exactly; beyond-critical couplings throw PhaseViolation.
NormalModes normal_mode_frequencies(const SystemParams& p, double t);

// Same diagonalization with explicit frequencies, no time dependence.
NormalModes normal_modes_static(double omega_a, double wb, double g);

// True iff g < g_c(t) for every t in the cycle (up to the critical snap).
bool normal_phase_check(const SystemParams& p);

// Minimum of eps_minus(t) over one period: dense scan plus golden-section
// refinement, no closed-form assumption about the minimizer.
GapMinimum gap_minimum(const SystemParams& p, int samples = 4096);

// Advisory check that the bosonic description of the ensemble still holds:
// occupation must stay a small fraction of n_atoms.
HpValidity hp_validity_check(double excitation_number, const SystemParams& p);

}  // namespace dicke
