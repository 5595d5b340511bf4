#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace depthkit {

using cplx = std::complex<double>;

namespace detail {

// Lanczos g = 7, n = 9
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline cplx lanczos_log_gamma(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z) without overflow for large |Im z|, up to multiples of 2 pi i
inline cplx log_sin_pi(cplx z) {
    const cplx ipz(-std::numbers::pi * z.imag(), std::numbers::pi * z.real());
    if (z.imag() >= 0.0) return -ipz + std::log(1.0 - std::exp(2.0 * ipz)) - std::log(cplx(0.0, -2.0)) ;
    return ipz + std::log(1.0 - std::exp(-2.0 * ipz)) - std::log(cplx(0.0, 2.0));
}

} // namespace detail

// log Gamma(z), correct modulo 2 pi i (intended for use inside exp)
inline cplx log_gamma(cplx z) {
    if (z.real() < 0.5) return std::log(std::numbers::pi) - detail::log_sin_pi(z) - detail::lanczos_log_gamma(1.0 - z);
    return detail::lanczos_log_gamma(z);
}

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

} // namespace depthkit
