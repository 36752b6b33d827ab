#include "dickesim/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dicke {

double omega_b(const SystemParams& p, double t) {
    return p.omega_0 + p.lambda * std::sin(p.eta * t);
}

double critical_coupling(const SystemParams& p, double t) {
    return 0.5 * std::sqrt(p.omega_a * omega_b(p, t));
}

NormalModes normal_modes_static(double omega_a, double wb, double g) {
    const double gc = 0.5 * std::sqrt(omega_a * wb);
    const double a2 = omega_a * omega_a;
    const double b2 = wb * wb;
    const double diff = b2 - a2;
    const double disc = std::sqrt(diff * diff + 16.0 * g * g * omega_a * wb);
    const double ep2 = 0.5 * (a2 + b2 + disc);
    double em2 = 0.5 * (a2 + b2 - disc);

    NormalModes nm;
    nm.eps_plus = std::sqrt(ep2);
    if (std::abs(g - gc) <= 1e-12 * gc) {
        // At criticality em2 is a difference of nearly equal numbers; the
        // rounding noise would surface as a spurious gap of order 1e-8.
        nm.eps_minus = 0.0;
        return nm;
    }
    if (em2 < 0.0) {
        if (em2 < -1e-12 * ep2) {
            std::ostringstream os;
            os << "normal phase violated: g = " << g << " exceeds g_c = " << gc;
            throw PhaseViolation(os.str());
        }
        em2 = 0.0;
    }
    nm.eps_minus = std::sqrt(em2);
    return nm;
}

NormalModes normal_mode_frequencies(const SystemParams& p, double t) {
    try {
        return normal_modes_static(p.omega_a, omega_b(p, t), p.g);
    } catch (const PhaseViolation&) {
        std::ostringstream os;
        os << "normal phase violated at t = " << t
           << ": g = " << p.g << " exceeds g_c(t) = " << critical_coupling(p, t);
        throw PhaseViolation(os.str());
    }
}

bool normal_phase_check(const SystemParams& p) {
    // g_c(t) is monotone in omega_b(t), so its minimum over the cycle is at
    // omega_b = omega_0 - lambda.
    const double wb_min = p.omega_0 - p.lambda;
    if (!(wb_min > 0.0)) return false;
    const double gc_min = 0.5 * std::sqrt(p.omega_a * wb_min);
    return p.g < gc_min || std::abs(p.g - gc_min) <= 1e-12 * gc_min;
}

GapMinimum gap_minimum(const SystemParams& p, int samples) {
    if (samples < 8) samples = 8;
    const double T = p.period();
    auto f = [&](double t) { return normal_mode_frequencies(p, t).eps_minus; };

    // Dense scan for the global bracket.
    int best = 0;
    double fbest = f(0.0);
    for (int i = 1; i < samples; ++i) {
        const double v = f(T * i / samples);
        if (v < fbest) {
            fbest = v;
            best = i;
        }
    }
    double a = T * (best - 1) / samples;
    double b = T * (best + 1) / samples;

    // Golden-section refinement.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-12) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }

    GapMinimum gm;
    gm.t_min = 0.5 * (a + b);
    if (gm.t_min < 0.0) gm.t_min += T;
    gm.eps_min = f(gm.t_min);
    return gm;
}

HpValidity hp_validity_check(double excitation_number, const SystemParams& p) {
    HpValidity v;
    v.ratio = std::max(0.0, excitation_number) / p.n_atoms;
    v.ok = v.ratio < 0.01;
    return v;
}

}  // namespace dicke
