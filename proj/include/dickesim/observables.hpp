#pragma once

#include <string>
#include <vector>

#include "dickesim/damping.hpp"
#include "dickesim/floquet.hpp"
#include "dickesim/params.hpp"

namespace dicke {

struct SpectralPoint {
    double omega = 0.0;
    double value = 0.0;
};

struct SpectralResult {
    std::vector<SpectralPoint> points;
    std::vector<std::string> warnings;  // grid-coarseness advisories
};

// Emission kernel at probe frequency omega:
//   K(omega) = sum_j |G_{(0,a),(j,adag)}(omega)|^2 [omega + j eta < 0].
// The indicator selects columns whose input noise lies in the occupied
// (positive-frequency) half of the vacuum bath spectrum.
double sideband_emission_kernel(const SystemParams& p, const DampingModel& d,
                                int m, double omega);

// Steady-state intracavity occupation <a^dag a> = (gamma0/pi) * int K domega
// over (-omega_max, m eta), with the left tail bounded by |omega|^-4 decay.
double intracavity_photons(const SystemParams& p, const DampingModel& d,
                           int m, double rel_tol = 1e-6);

// Output spectral density S(omega) = (2 gamma0^2 / pi) K(omega) for
// omega > 0; only positive output frequencies carry radiated quanta.
double spectral_density_at(const SystemParams& p, const DampingModel& d,
                           int m, double omega);

// Total radiated flux int_0^{m eta} S(omega) domega (the kernel vanishes
// identically above m eta at truncation m).
double output_flux(const SystemParams& p, const DampingModel& d, int m,
                   double rel_tol = 1e-6);

// S on a user grid, with warnings when sampling near a predicted emission
// peak is coarser than gamma0/5 inside +-3 gamma0 of the peak.
SpectralResult spectral_density(const SystemParams& p, const DampingModel& d,
                                int m, const std::vector<double>& grid);

// The grid-coarseness advisories alone: peaks narrower than the sampling
// step would be missed or distorted in a plotted spectrum.
std::vector<std::string> grid_coarseness_warnings(
    const SystemParams& p, const DampingModel& d,
    const std::vector<double>& grid);

// Positive predicted emission frequencies {eps0, |eta - eps0|, eta + eps0,
// eta + 2 eps0} with eps0 the lower branch frequency at mean detuning.
std::vector<double> predicted_peaks(const SystemParams& p);

// Smallest m >= 1 whose flux changes by <= tol (relative) when m increases
// by one; caps at m_cap with NoConvergence. Undriven systems return 1.
int choose_truncation(const SystemParams& p, const DampingModel& d,
                      double tol = 1e-4, int m_cap = 8);

}  // namespace dicke
