#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dickesim/params.hpp"

namespace dicke {

// Slow-drive bookkeeping for the periodically modulated coupling distance.
// The cycle is treated as a closed-system sweep of the control parameter
// g_c(t)/g; damping plays no role here.
struct KzSchedule {
    SystemParams params;

    explicit KzSchedule(const SystemParams& p);

    // Relative distance from criticality, g_c(t)/g - 1 (positive in the
    // normal phase).
    double relative_distance(double t) const;
    double relative_distance_rate(double t) const;

    // Instantaneous lower-branch gap and relaxation time tau0/gap.
    double gap(double t) const;
    double relaxation_time(double t) const;

    // Adiabaticity margin q = |distance| - tau * |rate|; the dynamics is
    // adiabatic where q > 0 and impulse-like where q < 0. Using this
    // divergence-free form keeps root finding stable where the rate
    // crosses zero.
    double adiabaticity(double t) const;

    // Scan anchor: the distance maximum, where the rate vanishes and the
    // margin is strictly positive.
    double t_start() const;
    double period() const { return params.period(); }
};

struct FreezeOut {
    std::vector<double> times;      // boundary crossings, sorted, even count
    std::vector<double> residuals;  // |q| at each returned root
};

// All crossings of q = 0 in one cycle starting from the distance maximum:
// dense sign-change scan plus bisection to 1e-12. Zero crossings raise
// NoFreezeOut; an odd count is rescanned 4x finer and then raises
// OddRootCount.
FreezeOut freeze_out_times(const KzSchedule& s, int n_scan = 16384);

// c[n] = <phi_n^{eps_basis} | phi_0^{eps_ground}> for harmonic-oscillator
// ground states of different frequencies; odd entries vanish.
std::vector<double> overlap_ground_column(double eps_basis,
                                          double eps_ground, int n_max);

// Full overlap table O(n, m) = <phi_n^{eps_basis} | phi_m^{eps_ground}>,
// (n_max+1) x (n_max+1), built by ladder recursion on a taller internal
// buffer. Throws TruncationError when n_max cannot hold the ground
// column's norm to 1e-6.
Eigen::MatrixXd overlap_coefficients(double eps_basis, double eps_ground,
                                     int n_max);

// n_max that bounds the ground column's discarded tail mass by tol.
int suggested_overlap_n_max(double eps_a, double eps_b, double tol = 1e-8);

// Phase integral int_{t2}^{t3} gap(t) dt (adaptive, abs+rel 1e-10).
double adiabatic_phase(const KzSchedule& s, double t2, double t3,
                       double tol = 1e-10);

// theta_n = (n + 1/2) * adiabatic_phase for n = 0..n_max.
std::vector<double> dynamical_phases(const KzSchedule& s, double t2,
                                     double t3, int n_max);

// Residual excitation probability after one drive cycle in the
// adiabatic-impulse approximation: the gap is frozen across each impulse
// window and the intermediate adiabatic stretch contributes phases
// (n + 1/2) * Theta that interfere in the return amplitude. Clamped to
// [0, 1]; returns 0 when no impulse window exists. n_max < 0 selects the
// truncation automatically so the trailing term is below 1e-8.
double excitation_probability(const SystemParams& p, int n_max = -1);

// Drive frequencies below the minimal gap over the cycle are the
// adiabatic regime; this returns that minimal gap.
double adiabatic_threshold(const SystemParams& p);

// Advisory: the two-level (single lower branch) reduction assumes the
// upper branch is far detuned, eps_plus >= 5 * max(eps_minus, eta).
std::optional<std::string> kz_regime_warning(const SystemParams& p);

}  // namespace dicke
