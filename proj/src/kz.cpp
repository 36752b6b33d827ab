#include "dickesim/kz.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "dickesim/model.hpp"

namespace dicke {

namespace {

constexpr double kPi = std::numbers::pi;

double bisect(const KzSchedule& s, double a, double b, double qa) {
    // Invariant: q changes sign on [a, b]; qa = q(a).
    while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        const double qm = s.adiabaticity(mid);
        if ((qa < 0.0) == (qm < 0.0)) {
            a = mid;
            qa = qm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

struct OverlapParams {
    double mu = 1.0;
    double nu = 0.0;
};

OverlapParams overlap_params(double eps_basis, double eps_ground) {
    if (!(eps_basis > 0.0) || !(eps_ground > 0.0)) {
        throw Error("oscillator overlaps need strictly positive frequencies");
    }
    const double root = 2.0 * std::sqrt(eps_basis * eps_ground);
    return {(eps_basis + eps_ground) / root, (eps_ground - eps_basis) / root};
}

}  // namespace

KzSchedule::KzSchedule(const SystemParams& p) : params(p) {
    params.validate();
    if (!normal_phase_check(params)) {
        throw PhaseViolation(
            "sweep schedule requires the normal phase over the whole cycle");
    }
}

double KzSchedule::relative_distance(double t) const {
    return critical_coupling(params, t) / params.g - 1.0;
}

double KzSchedule::relative_distance_rate(double t) const {
    // d g_c / dt = omega_a * d omega_b/dt / (8 g_c).
    const double gc = critical_coupling(params, t);
    return params.omega_a * params.lambda * params.eta *
           std::cos(params.eta * t) / (8.0 * gc * params.g);
}

double KzSchedule::gap(double t) const {
    return normal_mode_frequencies(params, t).eps_minus;
}

double KzSchedule::relaxation_time(double t) const {
    return params.tau0 / gap(t);
}

double KzSchedule::adiabaticity(double t) const {
    return std::abs(relative_distance(t)) -
           relaxation_time(t) * std::abs(relative_distance_rate(t));
}

double KzSchedule::t_start() const { return 0.5 * kPi / params.eta; }

FreezeOut freeze_out_times(const KzSchedule& s, int n_scan) {
    if (n_scan < 16) n_scan = 16;
    const double t0 = s.t_start();
    const double T = s.period();

    auto scan = [&](int n) {
        std::vector<double> roots;
        double tprev = t0;
        double qprev = s.adiabaticity(tprev);
        for (int i = 1; i <= n; ++i) {
            const double t = t0 + T * i / n;
            const double q = s.adiabaticity(t);
            if ((qprev < 0.0) != (q < 0.0)) {
                roots.push_back(bisect(s, tprev, t, qprev));
            }
            tprev = t;
            qprev = q;
        }
        return roots;
    };

    std::vector<double> roots = scan(n_scan);
    if (roots.size() % 2 != 0) {
        roots = scan(4 * n_scan);
        if (roots.size() % 2 != 0) {
            std::ostringstream os;
            os << "found " << roots.size()
               << " adiabatic/impulse crossings in one cycle even after "
               << "refining the scan (tangency or scan artifact)";
            throw OddRootCount(os.str());
        }
    }
    if (roots.empty()) {
        throw NoFreezeOut(
            "the sweep stays adiabatic over the whole cycle: no "
            "adiabatic/impulse crossing found");
    }

    FreezeOut fo;
    fo.times = roots;
    fo.residuals.reserve(roots.size());
    for (double r : roots) fo.residuals.push_back(std::abs(s.adiabaticity(r)));
    return fo;
}

std::vector<double> overlap_ground_column(double eps_basis,
                                          double eps_ground, int n_max) {
    if (n_max < 0) throw Error("overlap column needs n_max >= 0");
    const auto [mu, nu] = overlap_params(eps_basis, eps_ground);
    std::vector<double> c(n_max + 1, 0.0);
    c[0] = 1.0 / std::sqrt(mu);
    for (int n = 1; n < n_max; ++n) {
        c[n + 1] = -(nu / mu) * std::sqrt(double(n) / double(n + 1)) * c[n - 1];
    }
    return c;
}

int suggested_overlap_n_max(double eps_a, double eps_b, double tol) {
    const auto [mu, nu] = overlap_params(eps_a, eps_b);
    const double r = std::abs(nu) / mu;  // < 1 since mu^2 - nu^2 = 1
    if (r < 1e-8) return 16;
    // Level populations fall off as r^n (even n), so the discarded tail
    // beyond level n is r^{n+2} / (1 - r^2).
    const double n = std::log(tol * (1.0 - r * r)) / std::log(r);
    const int nmax = static_cast<int>(std::ceil(std::max(16.0, n))) + 8;
    return std::min(nmax + (nmax % 2), 20000);
}

Eigen::MatrixXd overlap_coefficients(double eps_basis, double eps_ground,
                                     int n_max) {
    if (n_max < 0) throw Error("overlap table needs n_max >= 0");
    const auto [mu, nu] = overlap_params(eps_basis, eps_ground);

    // The ladder recursion for column m+1 consumes one extra row of column
    // m, so build on a buffer tall enough for every returned column.
    const int rows = 2 * n_max + 8;
    std::vector<double> col = overlap_ground_column(eps_basis, eps_ground, rows);

    double norm0 = 0.0;
    for (double v : col) norm0 += v * v;
    if (std::abs(norm0 - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "overlap table truncation too small: ground-column norm "
           << "deviates by " << std::abs(norm0 - 1.0)
           << " at internal height " << rows;
        throw TruncationError(os.str());
    }

    Eigen::MatrixXd O(n_max + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n) O(n, 0) = col[n];

    std::vector<double> next(rows + 1, 0.0);
    for (int m = 0; m < n_max; ++m) {
        const int valid = rows - m - 1;  // rows of column m+1 still exact
        for (int n = 0; n <= valid; ++n) {
            const double lower = n > 0 ? mu * std::sqrt(double(n)) * col[n - 1]
                                       : 0.0;
            const double upper = nu * std::sqrt(double(n + 1)) * col[n + 1];
            next[n] = (lower + upper) / std::sqrt(double(m + 1));
        }
        for (int n = valid + 1; n <= rows; ++n) next[n] = 0.0;
        col.assign(next.begin(), next.end());
        col.resize(rows + 1);
        for (int n = 0; n <= n_max; ++n) O(n, m + 1) = col[n];
    }
    return O;
}

double adiabatic_phase(const KzSchedule& s, double t2, double t3,
                       double tol) {
    using quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    const double theta =
        quad::integrate([&](double t) { return s.gap(t); }, t2, t3, 15, tol,
                        &err);
    if (err > tol * std::max(1.0, std::abs(theta))) {
        std::ostringstream os;
        os << "phase integral failed to reach tolerance " << tol
           << " (error estimate " << err << ")";
        throw QuadratureFailure(os.str());
    }
    return theta;
}

std::vector<double> dynamical_phases(const KzSchedule& s, double t2,
                                     double t3, int n_max) {
    const double theta = adiabatic_phase(s, t2, t3);
    std::vector<double> out(n_max + 1);
    for (int n = 0; n <= n_max; ++n) out[n] = (n + 0.5) * theta;
    return out;
}

double excitation_probability(const SystemParams& p, int n_max) {
    const KzSchedule s(p);
    FreezeOut fo;
    try {
        fo = freeze_out_times(s);
    } catch (const NoFreezeOut&) {
        return 0.0;
    }

    double raw = 0.0;
    if (fo.times.size() == 2) {
        // Single impulse window: the state re-enters the adiabatic regime
        // as the frozen ground state of the entry gap.
        const auto [mu, nu] =
            overlap_params(s.gap(fo.times[1]), s.gap(fo.times[0]));
        raw = 1.0 - 1.0 / mu;
    } else if (fo.times.size() == 4) {
        const double e1 = s.gap(fo.times[0]);
        const double e2 = s.gap(fo.times[1]);
        const double e3 = s.gap(fo.times[2]);
        const double e4 = s.gap(fo.times[3]);
        const double theta = adiabatic_phase(s, fo.times[1], fo.times[2]);

        int nm = n_max >= 0 ? n_max
                            : std::max({40, suggested_overlap_n_max(e2, e1),
                                        suggested_overlap_n_max(e3, e4)});
        for (;;) {
            const std::vector<double> c21 = overlap_ground_column(e2, e1, nm);
            const std::vector<double> c43 = overlap_ground_column(e3, e4, nm);
            std::complex<double> A = 0.0;
            for (int n = 0; n <= nm; n += 2) {
                A += c43[n] * c21[n] *
                     std::exp(std::complex<double>(0.0, -(n + 0.5) * theta));
            }
            const double trailing = std::abs(c43[nm - nm % 2] * c21[nm - nm % 2]);
            if (n_max >= 0 || trailing < 1e-8) {
                raw = 1.0 - std::norm(A);
                break;
            }
            if (nm >= 20000) {
                std::ostringstream os;
                os << "return amplitude needs more than " << nm
                   << " oscillator levels to reach the 1e-8 trailing bound";
                throw TruncationError(os.str());
            }
            nm = std::min(2 * nm, 20000);
        }
    } else {
        std::ostringstream os;
        os << "unsupported impulse-window structure: " << fo.times.size()
           << " crossings per cycle";
        throw Error(os.str());
    }

    if (raw < -1e-9 || raw > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "excitation probability " << raw << " outside [0,1] beyond "
           << "rounding tolerance";
        throw Error(os.str());
    }
    return std::clamp(raw, 0.0, 1.0);
}

double adiabatic_threshold(const SystemParams& p) {
    return gap_minimum(p).eps_min;
}

std::optional<std::string> kz_regime_warning(const SystemParams& p) {
    const NormalModes nm = normal_modes_static(p.omega_a, p.omega_0, p.g);
    const double floor = 5.0 * std::max(nm.eps_minus, p.eta);
    if (nm.eps_plus < floor) {
        std::ostringstream os;
        os << "single-branch reduction is marginal here: eps_plus = "
           << nm.eps_plus << " < 5 * max(eps_minus, eta) = " << floor;
        return os.str();
    }
    return std::nullopt;
}

}  // namespace dicke
