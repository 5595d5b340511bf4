#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "depthkit/analytic/bessel.hpp"
#include "depthkit/analytic/quadrature.hpp"
#include "depthkit/analytic/test_function.hpp"
#include "depthkit/roots.hpp"
#include "depthkit/voronoi/coefficients.hpp"

namespace depthkit {

inline constexpr int kDeltaWeight = 12;
inline constexpr u64 kDualTermCap = 2'000'000;

struct VoronoiReport {
    cplx lhs, rhs;
    cplx main_term;
    double abs_error = 0.0, rel_error = 0.0;
    double lhs_scale = 0.0;      // sum |c(n) g(n)|
    u64 dual_terms = 0;          // dual index at which the sum was truncated
    double truncation_threshold = 0.0;
    double quadrature_error = 0.0;  // summed error estimates of the dual transforms
};

namespace detail {

inline void require_coprime(i64 a, u64 q) {
    if (q == 0) throw DomainError("modulus 0");
    if (std::gcd(reduce(a, q), q) != 1 && q != 1) throw NotCoprime("gcd(a, q) != 1");
}

inline double l1_norm(const TestFunction& g) {
    const Interval s = g.support();
    return integrate([&](double x) { return std::abs(g(x)); }, s.lo, s.hi, 1e-14).value;
}

// integral g(x) K(4 pi sqrt(x y) / q) dx with K oscillating on the x-scale q sqrt(x/y)
template <class Kernel>
double hankel_transform(const TestFunction& g, double y, u64 q, Kernel kernel, double tol, double& err) {
    const Interval s = g.support();
    const double c = 4.0 * std::numbers::pi * std::sqrt(y) / static_cast<double>(q);
    auto f = [&](double x) { return g(x) * kernel(c * std::sqrt(x)); };
    auto period = [&](double x) { return static_cast<double>(q) * std::sqrt(x / y); };
    const auto r = integrate_oscillatory(f, s.lo, s.hi, period, tol, 12);
    err += r.error;
    return r.value;
}

// transform tolerance: the requested share of the threshold, floored at the
// evaluation-noise level of the integrand
// 10x below the stated relative tolerance, but never below what the transforms resolve
inline double truncation_threshold(double rel, double lhs, double l1) { return std::max(0.1 * rel * lhs, 1e-12 * l1); }

inline double transform_tolerance(double threshold, double l1) { return std::max(1e-3 * threshold, 1e-13 * l1); }

// Sums a dual series term by term; stops once the terms stay below thr over [n, 2n].
template <class Term>
std::pair<cplx, u64> dual_series(Term term, double thr) {
    cplx s = 0.0;
    u64 quiet_from = 0;
    for (u64 n = 1; n <= kDualTermCap; ++n) {
        const cplx t = term(n);
        s += t;
        if (std::abs(t) >= thr) quiet_from = 0;
        else if (quiet_from == 0) quiet_from = n;
        if (quiet_from > 0 && n >= 2 * quiet_from && n >= 16) return {s, n};
    }
    throw ContourTruncationFailure("dual sum did not decay within the term cap");
}

} // namespace detail

inline VoronoiReport gl2_voronoi_check(i64 a, u64 q, const TestFunction& g, double rel_threshold = 1e-12) {
    detail::require_coprime(a, q);
    VoronoiReport rep;
    if (g.is_zero()) return rep;
    const Interval s = g.support();
    const u64 lo = static_cast<u64>(std::max(1.0, std::ceil(s.lo))), hi = static_cast<u64>(std::floor(s.hi));
    const CoefficientSeries coeffs(std::max<u64>(hi, 2));
    for (u64 n = lo; n <= hi; ++n) {
        const double v = coeffs.lambda(n) * g(static_cast<double>(n));
        rep.lhs += v * e_frac(a * static_cast<i64>(n % q), q);
        rep.lhs_scale += std::abs(v);
    }
    const i64 d = q == 1 ? 0 : static_cast<i64>(inv_mod(a, q));
    const double l1 = detail::l1_norm(g);
    rep.truncation_threshold = detail::truncation_threshold(rel_threshold, std::abs(rep.lhs), l1);
    const double tol = detail::transform_tolerance(rep.truncation_threshold, l1);
    const double pref = 2.0 * std::numbers::pi / static_cast<double>(q);  // i^12 = 1
    auto term = [&](u64 n) -> cplx {
        const double h = detail::hankel_transform(g, static_cast<double>(n), q, [](double z) { return bessel_J(kDeltaWeight - 1, z); }, tol, rep.quadrature_error);
        return pref * delta_lambda(n) * h * e_frac(-d * static_cast<i64>(n % q), q);
    };
    auto [sum, n] = detail::dual_series(term, rep.truncation_threshold);
    rep.rhs = sum;
    rep.dual_terms = n;
    rep.abs_error = std::abs(rep.lhs - rep.rhs);
    rep.rel_error = rep.abs_error / std::abs(rep.lhs);
    return rep;
}

inline VoronoiReport divisor_voronoi_check(i64 a, u64 q, const TestFunction& g, bool include_main_term = true, double rel_threshold = 1e-12) {
    detail::require_coprime(a, q);
    VoronoiReport rep;
    if (g.is_zero()) return rep;
    const Interval s = g.support();
    const u64 lo = static_cast<u64>(std::max(1.0, std::ceil(s.lo))), hi = static_cast<u64>(std::floor(s.hi));
    auto sv = shared_sieve(static_cast<std::uint32_t>(std::max<u64>(hi, 2)));
    for (u64 n = lo; n <= hi; ++n) {
        const double v = sv->d(static_cast<std::uint32_t>(n)) * g(static_cast<double>(n));
        rep.lhs += v * e_frac(a * static_cast<i64>(n % q), q);
        rep.lhs_scale += std::abs(v);
    }
    const double Qd = static_cast<double>(q);
    const double main = integrate([&](double x) { return (std::log(x) + 2.0 * kEulerGamma - 2.0 * std::log(Qd)) * g(x); }, s.lo, s.hi, 1e-14 * rep.lhs_scale).value / Qd;
    rep.main_term = main;
    const i64 abar = q == 1 ? 0 : static_cast<i64>(inv_mod(a, q));
    const double l1 = detail::l1_norm(g);
    rep.truncation_threshold = detail::truncation_threshold(rel_threshold, std::abs(rep.lhs), l1);
    const double tol = detail::transform_tolerance(rep.truncation_threshold, l1);
    auto term = [&](u64 n) -> cplx {
        const double y = static_cast<double>(n);
        const double hp = -2.0 * std::numbers::pi * detail::hankel_transform(g, y, q, [](double z) { return bessel_Y0(z); }, tol, rep.quadrature_error);
        // K0 decays like exp(-z); skip once the whole support is past z = 750
        const double zmin = 4.0 * std::numbers::pi * std::sqrt(y * std::max(s.lo, 0.0)) / Qd;
        double hm = 0.0;
        if (zmin <= 750.0) {
            const auto r = integrate([&](double x) { return g(x) * bessel_K0(4.0 * std::numbers::pi * std::sqrt(x * y) / Qd); }, s.lo, s.hi, tol, 12);
            rep.quadrature_error += 4.0 * r.error;
            hm = 4.0 * r.value;
        }
        const double dn = static_cast<double>(n <= sv->bound() ? sv->d(static_cast<std::uint32_t>(n)) : divisor_count(n));
        return dn / Qd * (hp * e_frac(-abar * static_cast<i64>(n % q), q) + hm * e_frac(abar * static_cast<i64>(n % q), q));
    };
    auto [sum, n] = detail::dual_series(term, rep.truncation_threshold);
    rep.rhs = sum + (include_main_term ? cplx(main) : cplx(0.0));
    rep.dual_terms = n;
    rep.abs_error = std::abs(rep.lhs - rep.rhs);
    rep.rel_error = rep.abs_error / std::abs(rep.lhs);
    return rep;
}

} // namespace depthkit
