#include "dickesim/damping.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

namespace dicke {

double DampingModel::lamb_shift(double nu) const {
    if (nu == 0.0) return 0.0;
    const double L = uv_cutoff;
    return gamma0 / std::numbers::pi * std::log(std::abs(nu / (nu - L)));
}

double DampingModel::lamb_shift_numeric(double nu) const {
    if (nu == 0.0) return 0.0;
    const double L = uv_cutoff;
    using quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    auto f = [nu](double w) { return 1.0 / (nu - w); };
    double val = 0.0;
    if (nu > 0.0 && nu < L) {
        // The integrand is odd about w = nu, so a symmetric window around
        // the pole integrates to zero exactly and may be dropped.
        const double d = 0.5 * std::min(nu, L - nu);
        if (nu - d > 0.0) val += quad::integrate(f, 0.0, nu - d, 12, 1e-12);
        if (nu + d < L) val += quad::integrate(f, nu + d, L, 12, 1e-12);
    } else {
        val = quad::integrate(f, 0.0, L, 12, 1e-12);
    }
    return gamma0 / std::numbers::pi * val;
}

std::complex<double> DampingModel::gamma_tilde(double nu) const {
    const double re = nu > 0.0 ? gamma0 : 0.0;
    const double im = include_lamb_shift ? lamb_shift(nu) : 0.0;
    return {re, im};
}

}  // namespace dicke
