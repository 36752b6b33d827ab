#include "dickesim/observables.hpp"

#include <algorithm>
#include <limits>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dickesim/model.hpp"

namespace dicke {

namespace {

constexpr double kPi = std::numbers::pi;

void require_damped(const DampingModel& d, const char* what) {
    if (!(d.gamma0 > 0.0)) {
        std::ostringstream os;
        os << what << " requires gamma0 > 0: without damping the response "
           << "has poles on the real frequency axis";
        throw DegenerateDamping(os.str());
    }
}

void require_normal_phase(const SystemParams& p, const char* what) {
    if (!normal_phase_check(p)) {
        std::ostringstream os;
        os << what << ": no stable steady state, the coupling leaves the "
           << "normal phase during the cycle (g = " << p.g << ")";
        throw PhaseViolation(os.str());
    }
}

// Pole and kink locations of the emission kernel inside (lo, hi):
// branch resonances shifted by every retained harmonic, plus the points
// j*eta where an indicator switches a column on or off.
std::vector<double> panel_edges(const SystemParams& p, int m, double lo,
                                double hi) {
    const NormalModes nm = normal_modes_static(p.omega_a, p.omega_0, p.g);
    std::vector<double> edges{lo, hi};
    for (int j = -m; j <= m; ++j) {
        const double base = j * p.eta;
        for (double x : {base, base + nm.eps_minus, base - nm.eps_minus,
                         base + nm.eps_plus, base - nm.eps_plus}) {
            if (x > lo + 1e-12 && x < hi - 1e-12) edges.push_back(x);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return b - a < 1e-12; }),
                edges.end());
    return edges;
}

struct PanelIntegral {
    double value = 0.0;
    double error = 0.0;
};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
};

template <typename F>
Panel integrate_one(const F& f, double a, double b) {
    using quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    Panel p{a, b, 0.0, 0.0};
    p.value = quad::integrate(f, a, b, 12, 1e-8, &p.error);
    return p;
}

// Re-integrate a panel whose error estimate exceeds its budget by splitting
// it in half until each piece meets its share of the budget.  Near-critical
// parameters produce response lines orders of magnitude narrower than the
// panel, and a single adaptive pass cannot always localize them.  Two brakes
// keep a divergent line (drive gain above damping, no steady state) from
// burning minutes: a split that fails to reduce the error estimate marks
// structure no depth can resolve, and the recursion depth is capped.
template <typename F>
void refine_panel(const F& f, const Panel& p, double budget, int depth,
                  PanelIntegral& acc) {
    if (p.error <= budget || depth == 0) {
        acc.value += p.value;
        acc.error += p.error;
        return;
    }
    const double mid = 0.5 * (p.a + p.b);
    const Panel left = integrate_one(f, p.a, mid);
    const Panel right = integrate_one(f, mid, p.b);
    if (left.error + right.error > 0.9 * p.error) {
        acc.value += left.value + right.value;
        acc.error += left.error + right.error;
        return;
    }
    refine_panel(f, left, 0.5 * budget, depth - 1, acc);
    refine_panel(f, right, 0.5 * budget, depth - 1, acc);
}

template <typename F>
PanelIntegral integrate_panels(const F& f, const std::vector<double>& edges,
                               double rel_tol) {
    std::vector<Panel> panels;
    panels.reserve(edges.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        panels.push_back(integrate_one(f, edges[i], edges[i + 1]));
    }
    PanelIntegral out;
    double prev_error = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 3; ++round) {
        out = PanelIntegral{};
        for (const Panel& p : panels) {
            out.value += p.value;
            out.error += p.error;
        }
        const double goal = rel_tol * std::max(std::abs(out.value), 1e-30);
        if (out.error <= goal) break;
        // A refinement round that failed to halve the total error is not
        // going to succeed on a rerun: give up and let the caller report
        // the failed tolerance instead of grinding on a divergence.
        if (round == 2 || out.error > 0.5 * prev_error) break;
        prev_error = out.error;
        const double budget =
            0.25 * goal / static_cast<double>(panels.size());
        for (Panel& p : panels) {
            if (p.error <= budget) continue;
            PanelIntegral acc;
            refine_panel(f, p, budget, 8, acc);
            p.value = acc.value;
            p.error = acc.error;
        }
    }
    return out;
}

void check_tolerance(const PanelIntegral& pi, double rel_tol,
                     const char* what) {
    if (!std::isfinite(pi.value) ||
        pi.error > rel_tol * std::max(std::abs(pi.value), 1e-30)) {
        std::ostringstream os;
        os << what << " quadrature failed: value " << pi.value
           << ", error estimate " << pi.error << ", requested relative "
           << rel_tol;
        throw QuadratureFailure(os.str());
    }
}

}  // namespace

double sideband_emission_kernel(const SystemParams& p, const DampingModel& d,
                                int m, double omega) {
    const SidebandGreenFunction gf = green_function(assemble(p, d, omega, m));
    double k = 0.0;
    for (int j = -m; j <= m; ++j) {
        if (omega + j * p.eta < 0.0) {
            k += std::norm(gf.at(0, kA, j, kAdag));
        }
    }
    return k;
}

double intracavity_photons(const SystemParams& p, const DampingModel& d,
                           int m, double rel_tol) {
    require_damped(d, "intracavity_photons");
    require_normal_phase(p, "intracavity_photons");
    const NormalModes nm = normal_modes_static(p.omega_a, p.omega_0 + p.lambda, p.g);
    const double hi = m * p.eta;
    const double lo = -(std::max(nm.eps_plus, p.eta * (m + 1)) +
                        50.0 * d.gamma0 + 5.0);
    auto f = [&](double w) { return sideband_emission_kernel(p, d, m, w); };
    PanelIntegral pi = integrate_panels(f, panel_edges(p, m, lo, hi), rel_tol);
    // Below lo every resonance is far detuned and K ~ |omega|^-4, so the
    // discarded tail is bounded by f(lo)*|lo|/3.
    pi.error += f(lo) * std::abs(lo) / 3.0;
    check_tolerance(pi, rel_tol, "intracavity_photons");
    return d.gamma0 / kPi * pi.value;
}

double spectral_density_at(const SystemParams& p, const DampingModel& d,
                           int m, double omega) {
    require_damped(d, "spectral_density");
    require_normal_phase(p, "spectral_density");
    if (omega <= 0.0) return 0.0;
    return 2.0 * d.gamma0 * d.gamma0 / kPi *
           sideband_emission_kernel(p, d, m, omega);
}

double output_flux(const SystemParams& p, const DampingModel& d, int m,
                   double rel_tol) {
    require_damped(d, "output_flux");
    require_normal_phase(p, "output_flux");
    auto f = [&](double w) { return sideband_emission_kernel(p, d, m, w); };
    const PanelIntegral pi =
        integrate_panels(f, panel_edges(p, m, 0.0, m * p.eta), rel_tol);
    check_tolerance(pi, rel_tol, "output_flux");
    return 2.0 * d.gamma0 * d.gamma0 / kPi * pi.value;
}

std::vector<double> predicted_peaks(const SystemParams& p) {
    const double eps0 = normal_modes_static(p.omega_a, p.omega_0, p.g).eps_minus;
    std::vector<double> peaks;
    for (double x : {eps0, std::abs(p.eta - eps0), p.eta + eps0,
                     p.eta + 2.0 * eps0}) {
        if (x > 0.0) peaks.push_back(x);
    }
    std::sort(peaks.begin(), peaks.end());
    peaks.erase(std::unique(peaks.begin(), peaks.end(),
                            [](double a, double b) { return b - a < 1e-12; }),
                peaks.end());
    return peaks;
}

std::vector<std::string> grid_coarseness_warnings(
    const SystemParams& p, const DampingModel& d,
    const std::vector<double>& grid) {
    std::vector<std::string> warnings;
    if (grid.size() < 2) return warnings;
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    const double want = d.gamma0 / 5.0;
    for (double peak : predicted_peaks(p)) {
        const double lo = peak - 3.0 * d.gamma0;
        const double hi = peak + 3.0 * d.gamma0;
        if (sorted.front() > hi || sorted.back() < lo) continue;
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            const bool touches = sorted[i + 1] > lo && sorted[i] < hi;
            if (touches) worst = std::max(worst, sorted[i + 1] - sorted[i]);
        }
        if (worst > want * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "grid too coarse near predicted peak omega = " << peak
               << ": spacing " << worst << " exceeds gamma0/5 = " << want;
            warnings.push_back(os.str());
        }
    }
    return warnings;
}

SpectralResult spectral_density(const SystemParams& p, const DampingModel& d,
                                int m, const std::vector<double>& grid) {
    require_damped(d, "spectral_density");
    SpectralResult out;
    out.points.reserve(grid.size());
    for (double w : grid) {
        out.points.push_back({w, spectral_density_at(p, d, m, w)});
    }
    out.warnings = grid_coarseness_warnings(p, d, grid);
    return out;
}

int choose_truncation(const SystemParams& p, const DampingModel& d,
                      double tol, int m_cap) {
    require_damped(d, "choose_truncation");
    if (p.lambda == 0.0) return 1;
    double prev = output_flux(p, d, 1);
    for (int m = 1; m < m_cap; ++m) {
        const double next = output_flux(p, d, m + 1);
        if (std::abs(next - prev) <= tol * std::abs(next)) return m;
        prev = next;
    }
    std::ostringstream os;
    os << "flux did not settle to relative " << tol
       << " within sideband cap m = " << m_cap;
    throw NoConvergence(os.str());
}

}  // namespace dicke
