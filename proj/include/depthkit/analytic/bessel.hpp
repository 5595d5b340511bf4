#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "depthkit/errors.hpp"

namespace depthkit {

inline constexpr int kBesselMaxOrder = 30;
inline constexpr double kEulerGamma = 0.57721566490153286061;

namespace detail {

inline double bessel_j_series(int n, double x) {
    const double h = 0.5 * x, h2 = h * h;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= h / k;
    double s = term;
    for (int k = 1; k < 500; ++k) {
        term *= -h2 / (static_cast<double>(k) * (k + n));
        s += term;
        if (std::abs(term) < 1e-17 * std::abs(s)) break;
    }
    return s;
}

// Hankel asymptotic factors P, Q; false when the series never gets below 1e-16
inline bool hankel_pq(double nu, double x, double& P, double& Q) {
    const double mu = 4.0 * nu * nu;
    P = 1.0;
    Q = 0.0;
    double term = 1.0, last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        const double a = std::abs(term);
        if (a > last && a > 1e-16) return false;
        // sign pattern: P gets a_0 - a_2 + a_4 ..., Q gets a_1 - a_3 + ...
        const int r = k % 4;
        if (r == 1) Q += term;
        else if (r == 2) P -= term;
        else if (r == 3) Q -= term;
        else P += term;
        if (a < 1e-17 || term == 0.0) return true;
        last = a;
    }
    return false;
}

// J_0 .. J_nmax at x > 0 by backward recurrence normalized with J_0 + 2 sum J_2k = 1
inline std::vector<double> bessel_j_miller(int nmax, double x) {
    int N = static_cast<int>(std::max<double>(nmax, x) + 20.0 * std::cbrt(std::max(x, 1.0)) + 30.0);
    if (N % 2) ++N;
    std::vector<double> j(N + 2, 0.0);
    j[N + 1] = 0.0;
    j[N] = 1e-300;
    double norm = 0.0;
    for (int k = N; k >= 1; --k) {
        j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250) {
            for (int i = k - 1; i <= N; ++i) j[i] *= 1e-250;
            norm *= 1e-250;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j[k - 1];
    }
    norm += j[0];
    std::vector<double> out(nmax + 1);
    for (int i = 0; i <= nmax; ++i) out[i] = j[i] / norm;
    return out;
}

inline double bessel_k_series(int order, double x) {
    // K_0 and K_1 from their ascending series
    const double h = 0.5 * x, h2 = h * h, lg = std::log(h) + kEulerGamma;
    if (order == 0) {
        double term = 1.0, H = 0.0, I0 = 1.0, s = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= h2 / (static_cast<double>(k) * k);
            H += 1.0 / k;
            I0 += term;
            s += term * H;
            if (term < 1e-18) break;
        }
        return -lg * I0 + s;
    }
    // K_1 = (1/x) + log(x/2) I_1 - (x/4) sum (psi(k+1)+psi(k+2)) (x^2/4)^k/(k!(k+1)!) with psi(1) = -gamma
    double term = h, I1 = h;
    double s = 0.0;
    double Hk = 0.0, Hk1 = 1.0;  // harmonic numbers H_k, H_{k+1}
    double t = 1.0;
    s += t * (Hk + Hk1 - 2 * kEulerGamma);
    for (int k = 1; k < 200; ++k) {
        term *= h2 / (static_cast<double>(k) * (k + 1));
        I1 += term;
        t *= h2 / (static_cast<double>(k) * (k + 1));
        Hk += 1.0 / k;
        Hk1 += 1.0 / (k + 1);
        s += t * (Hk + Hk1 - 2 * kEulerGamma);
        if (t < 1e-18) break;
    }
    return 1.0 / x + std::log(h) * I1 - 0.5 * h * s;
}

// K_nu(x) = integral_0^inf exp(-x cosh t) cosh(nu t) dt by the trapezoid rule
inline double bessel_k_trapezoid(int order, double x) {
    const double step = 0.125 / std::max(1.0, std::sqrt(x / 4.0));
    double s = 0.5;
    for (int k = 1;; ++k) {
        const double t = k * step;
        const double c = std::cosh(t);
        const double f = std::exp(-x * (c - 1.0)) * (order ? std::cosh(order * t) : 1.0);
        s += f;
        if (x * (c - 1.0) > 45.0 + order * t) break;
    }
    return std::exp(-x) * step * s;
}

inline void check_order(int n) {
    if (n < 0 || n > kBesselMaxOrder) throw DomainError("Bessel order out of range");
}

} // namespace detail

inline double bessel_J(int n, double x) {
    detail::check_order(n);
    if (x < 0.0) throw DomainError("bessel_J needs x >= 0");
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x <= 8.0) return detail::bessel_j_series(n, x);
    double P, Q;
    if (x > 25.0 && detail::hankel_pq(n, x, P, Q)) {
        const double chi = x - (0.5 * n + 0.25) * std::numbers::pi;
        return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
    }
    return detail::bessel_j_miller(n, x)[n];
}

namespace detail {

// Y_0 and Y_1 from the Neumann series over Miller-normalized J values
inline std::pair<double, double> bessel_y01(double x) {
    double P, Q;
    if (x > 25.0) {
        double P1, Q1;
        if (hankel_pq(0, x, P, Q) && hankel_pq(1, x, P1, Q1)) {
            const double a = std::sqrt(2.0 / (std::numbers::pi * x));
            const double c0 = x - 0.25 * std::numbers::pi, c1 = x - 0.75 * std::numbers::pi;
            return {a * (P * std::sin(c0) + Q * std::cos(c0)), a * (P1 * std::sin(c1) + Q1 * std::cos(c1))};
        }
    }
    int N = static_cast<int>(x + 20.0 * std::cbrt(std::max(x, 1.0)) + 30.0);
    auto j = bessel_j_miller(N + 2, x);
    const double lg = std::log(0.5 * x) + kEulerGamma;
    double s0 = 0.0, s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= N + 2; ++k) {
        const double sg = (k % 2) ? -1.0 : 1.0;
        s0 += sg * j[2 * k] / k;
        s1 += sg * (j[2 * k - 1] - j[2 * k + 1]) / k;
    }
    const double y0 = (2.0 / std::numbers::pi) * (lg * j[0]) - (4.0 / std::numbers::pi) * s0;
    const double y1 = (2.0 / std::numbers::pi) * (lg * j[1] - j[0] / x) + (2.0 / std::numbers::pi) * s1;
    return {y0, y1};
}

} // namespace detail

inline double bessel_Y0(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_Y0 needs x > 0");
    return detail::bessel_y01(x).first;
}

inline double bessel_Y1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_Y1 needs x > 0");
    return detail::bessel_y01(x).second;
}

inline double bessel_Y(int n, double x) {
    detail::check_order(n);
    if (!(x > 0.0)) throw DomainError("bessel_Y needs x > 0");
    if (x > 25.0) {
        double P, Q;
        if (detail::hankel_pq(n, x, P, Q)) {
            const double chi = x - (0.5 * n + 0.25) * std::numbers::pi;
            return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::sin(chi) + Q * std::cos(chi));
        }
    }
    auto [y0, y1] = detail::bessel_y01(x);
    if (n == 0) return y0;
    for (int k = 1; k < n; ++k) {
        const double y2 = (2.0 * k / x) * y1 - y0;
        y0 = y1;
        y1 = y2;
    }
    return y1;
}

inline double bessel_K0(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_K0 needs x > 0");
    return x <= 1.0 ? detail::bessel_k_series(0, x) : detail::bessel_k_trapezoid(0, x);
}

inline double bessel_K1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_K1 needs x > 0");
    return x <= 1.0 ? detail::bessel_k_series(1, x) : detail::bessel_k_trapezoid(1, x);
}

// Z+(x) with J_nu(2 pi x) = e(x) Z+(x) + e(-x) Z-(x), Z- = conj(Z+).
inline std::complex<double> bessel_zplus(int nu, double x) {
    if (x < 2.0) throw AsymptoticRegimeRequired("Z+ needs x >= 2");
    const double z = 2.0 * std::numbers::pi * x;
    const std::complex<double> h1(bessel_J(nu, z), bessel_Y(nu, z));
    return 0.5 * h1 * std::polar(1.0, -z);
}

struct ZplusReport {
    double max_sqrt_scaled[3] = {0, 0, 0};  // max over the grid of x^j |Z+^(j)(x)| sqrt(x)
    double max_reconstruction_error = 0.0;  // over grid points with x >= 10
    double max_conjugate_error = 0.0;
};

// Derivative bounds x^j Z+^(j) << x^(-1/2) for j = 0, 1, 2 by central differences.
inline ZplusReport bessel_oscillatory_split(int nu, double lo, double hi, int points = 200) {
    if (lo < 2.0) throw AsymptoticRegimeRequired("Z+ split needs x >= 2");
    ZplusReport rep;
    for (int i = 0; i < points; ++i) {
        const double x = lo * std::pow(hi / lo, static_cast<double>(i) / std::max(1, points - 1));
        const double h = 1e-3 * x;
        auto z = [&](double t) { return bessel_zplus(nu, std::max(t, 2.0)); };
        const auto z0 = z(x);
        const auto zp = z(x + h), zm = z(x - h);
        const auto d1 = (zp - zm) / (2 * h);
        const auto d2 = (zp - 2.0 * z0 + zm) / (h * h);
        const double sx = std::sqrt(x);
        rep.max_sqrt_scaled[0] = std::max(rep.max_sqrt_scaled[0], std::abs(z0) * sx);
        rep.max_sqrt_scaled[1] = std::max(rep.max_sqrt_scaled[1], x * std::abs(d1) * sx);
        rep.max_sqrt_scaled[2] = std::max(rep.max_sqrt_scaled[2], x * x * std::abs(d2) * sx);
        const auto zm_conj = std::conj(z0);
        const std::complex<double> ex = std::polar(1.0, 2.0 * std::numbers::pi * x);
        const double rec = (ex * z0 + std::conj(ex) * zm_conj).real();
        if (x >= 10.0) rep.max_reconstruction_error = std::max(rep.max_reconstruction_error, std::abs(rec - bessel_J(nu, 2.0 * std::numbers::pi * x)));
        rep.max_conjugate_error = std::max(rep.max_conjugate_error, std::abs((ex * z0 + std::conj(ex) * zm_conj).imag()));
    }
    return rep;
}

} // namespace depthkit
