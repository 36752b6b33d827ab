#include "dickesim/time_domain.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>
#include <sstream>

#include "dickesim/floquet.hpp"
#include "dickesim/model.hpp"

namespace dicke {

namespace {

using cplx = std::complex<double>;
namespace ode = boost::numeric::odeint;

Eigen::Matrix4cd commutator_matrix() {
    Eigen::Matrix4cd J = Eigen::Matrix4cd::Zero();
    J(0, 2) = 1.0;
    J(1, 3) = 1.0;
    J(2, 0) = -1.0;
    J(3, 1) = -1.0;
    return J;
}

// Particle-hole conjugation: swaps the (a, b) block with (a^dag, b^dag).
Eigen::Vector4cd ph_conjugate(const Eigen::Vector4cd& v) {
    Eigen::Vector4cd w;
    w(0) = std::conj(v(2));
    w(1) = std::conj(v(3));
    w(2) = std::conj(v(0));
    w(3) = std::conj(v(1));
    return w;
}

// Moment equation dS/dt = Z(t) S + S Z^T + D, flattened to 32 doubles.
struct MomentRhs {
    Eigen::Matrix4cd M0;
    Eigen::Matrix4cd M1;
    Eigen::Matrix4cd Lambda;
    Eigen::Matrix4cd D;
    double eta = 0.0;

    void operator()(const std::vector<double>& x, std::vector<double>& dxdt,
                    double t) const {
        dxdt.resize(32);
        Eigen::Map<const Eigen::Matrix4cd> S(
            reinterpret_cast<const cplx*>(x.data()));
        Eigen::Map<Eigen::Matrix4cd> dS(reinterpret_cast<cplx*>(dxdt.data()));
        const Eigen::Matrix4cd Z =
            cplx(0.0, -1.0) * (M0 + std::sin(eta * t) * M1) - Lambda;
        dS = Z * S + S * Z.transpose() + D;
    }
};

class MomentIntegrator {
  public:
    MomentIntegrator(const SystemParams& p, const DampingModel& d, double tol)
        : stepper_(ode::make_controlled(
              tol, tol, ode::runge_kutta_cash_karp54<std::vector<double>>())) {
        if (!normal_phase_check(p)) {
            throw PhaseViolation(
                "time evolution is unstable: the coupling leaves the normal "
                "phase during the cycle");
        }
        rhs_.M0 = build_m0(p);
        rhs_.M1 = build_m1(p);
        rhs_.eta = p.eta;
        if (d.gamma0 > 0.0) {
            const DressedDecomposition dd = dressed_decomposition(p, d);
            rhs_.Lambda = -dd.damping;
            rhs_.D = dd.diffusion;
        } else {
            rhs_.Lambda = Eigen::Matrix4cd::Zero();
            rhs_.D = Eigen::Matrix4cd::Zero();
        }
        x_.resize(32, 0.0);
        Eigen::Map<Eigen::Matrix4cd>(reinterpret_cast<cplx*>(x_.data())) =
            vacuum_moments();
    }

    void advance_to(double t_target) {
        while (t_ < t_target - 1e-13) {
            double trial = std::min(dt_, t_target - t_);
            const bool clamped = trial < dt_;
            const double attempted = trial;
            const auto res = stepper_.try_step(std::ref(rhs_), x_, t_, trial);
            if (res == ode::controlled_step_result::success) {
                if (!clamped) dt_ = trial;
            } else {
                dt_ = trial;
                if (dt_ < 1e-12) {
                    std::ostringstream os;
                    os << "step size fell below 1e-12 at t = " << t_
                       << " (attempted " << attempted << ")";
                    throw StiffnessFailure(os.str());
                }
            }
        }
    }

    GaussianState sample(double t_label) const {
        GaussianState s;
        s.t = t_label;
        s.moments = Eigen::Map<const Eigen::Matrix4cd>(
            reinterpret_cast<const cplx*>(x_.data()));
        return s;
    }

  private:
    ode::controlled_runge_kutta<
        ode::runge_kutta_cash_karp54<std::vector<double>>>
        stepper_;
    MomentRhs rhs_;
    std::vector<double> x_;
    double t_ = 0.0;
    double dt_ = 1e-3;
};

}  // namespace

double GaussianState::commutator_deviation() const {
    const Eigen::Matrix4cd delta =
        moments - moments.transpose() - commutator_matrix();
    return delta.cwiseAbs().maxCoeff();
}

Eigen::Matrix4cd vacuum_moments() {
    Eigen::Matrix4cd S = Eigen::Matrix4cd::Zero();
    S(0, 2) = 1.0;
    S(1, 3) = 1.0;
    return S;
}

DressedDecomposition dressed_decomposition(const SystemParams& p,
                                           const DampingModel& d) {
    const NormalModes nm = normal_modes_static(p.omega_a, p.omega_0, p.g);
    if (nm.eps_minus <= 1e-10) {
        throw PhaseViolation(
            "dressed decomposition needs a finite lower-branch gap");
    }
    const Eigen::Matrix4cd M0 = build_m0(p);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(M0);
    if (es.info() != Eigen::Success) {
        throw Error("eigendecomposition of the drift matrix failed");
    }

    auto pick = [&](double target) {
        int best = 0;
        double dist = std::abs(es.eigenvalues()(0) - cplx(target, 0.0));
        for (int i = 1; i < 4; ++i) {
            const double di = std::abs(es.eigenvalues()(i) - cplx(target, 0.0));
            if (di < dist) {
                dist = di;
                best = i;
            }
        }
        return best;
    };

    Eigen::Matrix4cd V;
    V.col(0) = es.eigenvectors().col(pick(nm.eps_plus));
    V.col(1) = es.eigenvectors().col(pick(nm.eps_minus));
    V.col(2) = ph_conjugate(V.col(0));
    V.col(3) = ph_conjugate(V.col(1));

    const Eigen::Matrix4cd J = commutator_matrix();
    for (int k = 0; k < 2; ++k) {
        cplx s = (V.col(k).transpose() * J * V.col(k + 2))(0, 0);
        if (std::abs(s.imag()) > 1e-10 * std::abs(s) || s == cplx(0.0)) {
            throw Error("polariton eigenvectors lost symplectic pairing");
        }
        if (s.real() < 0.0) {
            V.col(k).swap(V.col(k + 2));
            s = -s;
        }
        const double scale = 1.0 / std::sqrt(s.real());
        V.col(k) *= scale;
        V.col(k + 2) *= scale;
    }
    if ((V.transpose() * J * V - J).cwiseAbs().maxCoeff() > 1e-10) {
        throw Error("symplectic normalization of polariton basis failed");
    }

    DressedDecomposition dd;
    dd.V = V;
    dd.Vinv = V.inverse();

    auto rate = [&](int k) {
        const cplx r = d.gamma0 * dd.Vinv(k, 0) * V(0, k);
        if (std::abs(r.imag()) > 1e-10 * std::max(d.gamma0, std::abs(r)) ||
            r.real() < 0.0) {
            throw Error("polariton damping rate is not real nonnegative");
        }
        return r.real();
    };
    dd.gamma_plus = rate(0);
    dd.gamma_minus = rate(1);

    Eigen::Matrix4cd Ld = Eigen::Matrix4cd::Zero();
    Ld(0, 0) = dd.gamma_plus;
    Ld(1, 1) = dd.gamma_minus;
    Ld(2, 2) = dd.gamma_plus;
    Ld(3, 3) = dd.gamma_minus;
    Eigen::Matrix4cd Dd = Eigen::Matrix4cd::Zero();
    Dd(0, 2) = 2.0 * dd.gamma_plus;
    Dd(1, 3) = 2.0 * dd.gamma_minus;

    dd.damping = -(V * Ld * dd.Vinv);
    dd.diffusion = V * Dd * V.transpose();
    return dd;
}

Eigen::Matrix4cd dressed_vacuum_moments(const SystemParams& p,
                                        const DampingModel& d) {
    const DressedDecomposition dd = dressed_decomposition(p, d);
    Eigen::Matrix4cd Sd = Eigen::Matrix4cd::Zero();
    Sd(0, 2) = 1.0;
    Sd(1, 3) = 1.0;
    return dd.V * Sd * dd.V.transpose();
}

Trajectory evolve(const SystemParams& p, const DampingModel& d,
                  double t_final, double tol, int samples_per_cycle) {
    p.validate();
    if (samples_per_cycle < 2) samples_per_cycle = 2;
    MomentIntegrator integ(p, d, tol);
    Trajectory out;
    out.samples_per_cycle = samples_per_cycle;
    const double dt_s = p.period() / samples_per_cycle;
    const long n = std::lround(std::ceil(t_final / dt_s - 1e-9));
    out.states.reserve(n + 1);
    out.states.push_back(integ.sample(0.0));
    for (long k = 1; k <= n; ++k) {
        const double ts = k * dt_s;
        integ.advance_to(ts);
        out.states.push_back(integ.sample(ts));
    }
    return out;
}

CycleAverage steady_cycle_average(const SystemParams& p,
                                  const DampingModel& d, double tol,
                                  int samples_per_cycle) {
    p.validate();
    if (!(d.gamma0 > 0.0)) {
        throw DegenerateDamping(
            "steady_cycle_average requires gamma0 > 0: an undamped drive "
            "never settles");
    }
    if (samples_per_cycle < 2) samples_per_cycle = 2;
    const double T = p.period();
    const double t_discard = 5.0 / d.gamma0;
    const double t_cap = 50.0 / d.gamma0;
    const int first_cycle = static_cast<int>(std::ceil(t_discard / T));

    MomentIntegrator integ(p, d, tol);
    const double dt_s = T / samples_per_cycle;
    std::vector<double> hist;  // cycle averages past the transient
    double last_resid = 0.0;
    double prev_extrap = 0.0;
    bool have_extrap = false;

    auto result = [&](double nbar, int c) {
        CycleAverage ca;
        ca.nbar = nbar;
        ca.flux_estimate = 2.0 * d.gamma0 * nbar;
        ca.cycles_used = c + 1;
        ca.t_converged = (c + 1) * T;
        return ca;
    };

    for (int c = 0;; ++c) {
        if (c * T > t_cap) {
            std::ostringstream os;
            os << "cycle average did not settle within 50/gamma0 "
               << "(last residual estimate " << last_resid << ")";
            throw NotConverged(os.str());
        }
        // Equal-weight samples over one period (periodic rectangle rule).
        double acc = 0.0;
        for (int i = 0; i < samples_per_cycle; ++i) {
            integ.advance_to(c * T + i * dt_s);
            acc += integ.sample(c * T + i * dt_s).occupation_a();
        }
        const double avg = acc / samples_per_cycle;
        if (c < first_cycle) continue;
        hist.push_back(avg);
        if (hist.size() < 3) continue;

        // The moment flow is linear, so the cycle averages approach their
        // limit geometrically; Aitken extrapolation of the last three
        // removes the slowest mode and its residual is checked directly.
        const std::size_t n = hist.size();
        const double d1 = hist[n - 2] - hist[n - 3];
        const double d0 = hist[n - 1] - hist[n - 2];
        if (std::abs(d0) <= 1e-12 * std::max(std::abs(avg), 1e-300)) {
            return result(avg, c);
        }
        if (d1 != 0.0) {
            const double q = d0 / d1;
            if (q > 0.0 && q < 0.999) {
                const double est = avg + d0 * q / (1.0 - q);
                const double scale = std::max(std::abs(est), 1e-300);
                last_resid = std::abs(est - avg) / scale;
                if (last_resid < 1e-4 && have_extrap &&
                    std::abs(est - prev_extrap) <= 1e-5 * scale) {
                    return result(est, c);
                }
                prev_extrap = est;
                have_extrap = true;
            } else {
                have_extrap = false;
            }
        }
    }
}

}  // namespace dicke
