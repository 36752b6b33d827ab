#include "dickesim/floquet.hpp"

#include <sstream>

namespace dicke {

using cplx = std::complex<double>;

Eigen::Matrix4cd build_m0(const SystemParams& p) {
    const double wa = p.omega_a;
    const double w0 = p.omega_0;
    const double g = p.g;
    Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
    // d/dt (a, b, a^dag, b^dag) = -i M0 (a, b, a^dag, b^dag):
    // [a, H] rows carry +omega, [a^dag, H] rows carry -omega, and the
    // position-position coupling g(a + a^dag)(b + b^dag) mixes all four.
    M(0, 0) = wa;
    M(0, 1) = g;
    M(0, 3) = g;
    M(1, 1) = w0;
    M(1, 0) = g;
    M(1, 2) = g;
    M(2, 2) = -wa;
    M(2, 1) = -g;
    M(2, 3) = -g;
    M(3, 3) = -w0;
    M(3, 0) = -g;
    M(3, 2) = -g;
    return M;
}

Eigen::Matrix4cd build_m1(const SystemParams& p) {
    Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
    M(1, 1) = p.lambda;
    M(3, 3) = -p.lambda;
    return M;
}

AssembledSidebands assemble(const SystemParams& p, const DampingModel& d,
                            double omega, int m) {
    if (m < 1) {
        std::ostringstream os;
        os << "sideband truncation m must be >= 1, got " << m;
        throw AssemblyError(os.str());
    }
    const int n = 2 * m + 1;
    const Eigen::Matrix4cd M0 = build_m0(p);
    const Eigen::Matrix4cd M1 = build_m1(p);
    const cplx I(0.0, 1.0);
    // sin(eta t) = (e^{i eta t} - e^{-i eta t}) / (2i); after the Fourier
    // transform convention u~(w) = int e^{i w t} u(t) dt the e^{+i eta t}
    // factor shifts the harmonic index up by one.
    const Eigen::Matrix4cd Cup = -0.5 * I * M1;   // j -> j+1
    const Eigen::Matrix4cd Cdn = +0.5 * I * M1;   // j -> j-1

    AssembledSidebands am;
    am.omega = omega;
    am.m = m;
    am.M = Eigen::MatrixXcd::Zero(4 * n, 4 * n);
    for (int j = -m; j <= m; ++j) {
        const int r = 4 * (j + m);
        const double nu = omega + j * p.eta;
        Eigen::Matrix4cd blk = M0;
        blk(0, 0) -= nu;
        blk(1, 1) -= nu;
        blk(2, 2) -= nu;
        blk(3, 3) -= nu;
        // One-sided bath: the a row is damped at +nu, the a^dag row at -nu.
        blk(0, 0) -= I * d.gamma_tilde(nu);
        blk(2, 2) -= I * std::conj(d.gamma_tilde(-nu));
        am.M.block<4, 4>(r, r) = blk;
        if (j + 1 <= m) am.M.block<4, 4>(r, r + 4) = Cup;
        if (j - 1 >= -m) am.M.block<4, 4>(r, r - 4) = Cdn;
    }
    return am;
}

SidebandGreenFunction green_function(const AssembledSidebands& am) {
    const int n = static_cast<int>(am.M.rows());
    const Eigen::MatrixXcd iM = cplx(0.0, 1.0) * am.M;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(iM);
    SidebandGreenFunction gf;
    gf.omega = am.omega;
    gf.m = am.m;
    gf.G = lu.solve(Eigen::MatrixXcd::Identity(n, n));
    gf.residual = (iM * gf.G - Eigen::MatrixXcd::Identity(n, n))
                      .cwiseAbs()
                      .maxCoeff();
    if (!(gf.residual <= 1e-10)) {
        std::ostringstream os;
        os << "sideband matrix numerically singular at omega = " << am.omega
           << " (residual " << gf.residual << "); an undamped pole sits on "
           << "the probe frequency";
        throw SingularMatrix(os.str());
    }
    return gf;
}

}  // namespace dicke
