#pragma once

#include <complex>

#include "dickesim/errors.hpp"

namespace dicke {

// Frequency-resolved cavity damping kernel for a flat Ohmic-like bath that
// occupies positive frequencies only:
//   Re gamma_tilde(nu) = gamma0 for nu > 0, 0 for nu <= 0.
// The imaginary part (bath-induced frequency pull) is off by default; when
// enabled it is the principal-value transform of the flat band [0, Lambda].
struct DampingModel {
    double gamma0 = 0.0;
    bool include_lamb_shift = false;
    double uv_cutoff = 1e3;  // band edge Lambda in units of omega_a

    std::complex<double> gamma_tilde(double nu) const;

    // Closed form of the band's principal-value integral,
    //   (gamma0/pi) * PV int_0^Lambda dw / (nu - w) = (gamma0/pi) ln|nu/(nu-Lambda)|.
    double lamb_shift(double nu) const;

    // Same quantity by adaptive quadrature with the singular window removed
    // symmetrically; used to cross-check the closed form.
    double lamb_shift_numeric(double nu) const;
};

}  // namespace dicke
