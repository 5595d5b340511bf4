#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "depthkit/analytic.hpp"

using namespace depthkit;

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

TEST(Bessel, Examples) {
    EXPECT_EQ(bessel_J(0, 0.0), 1.0);
    const double f11 = std::pow(2.0, 11) * std::tgamma(12.0);
    for (double x : {0.01, 0.1, 0.5, 1.0}) EXPECT_LE(std::abs(bessel_J(11, x)), std::pow(x, 11) / f11 * 1.01);
    for (double x : {1.0, 5.0, 20.0}) {
        const double h = 1e-5;
        const double dY = (bessel_Y0(x + h) - bessel_Y0(x - h)) / (2 * h);
        const double w = bessel_J(0, x) * dY - (-bessel_J(1, x)) * bessel_Y0(x);
        EXPECT_NEAR(w, 2.0 / (kPi * x), 1e-8);
    }
}

TEST(Bessel, MatchesLibraryOracles) {
    for (int n = 0; n <= 30; n += 3)
        for (double x = 0.05; x < 1000.0; x *= 1.37) {
            EXPECT_NEAR(bessel_J(n, x), std::cyl_bessel_j(double(n), x), 1e-11) << n << " " << x;
            if (x > 0.3 + n) {
                const double y = std::cyl_neumann(double(n), x);
                EXPECT_NEAR(bessel_Y(n, x), y, 1e-10 * std::max(1.0, std::abs(y))) << n << " " << x;
            }
        }
    for (double x = 0.01; x < 200.0; x *= 1.5) {
        EXPECT_NEAR(bessel_K0(x), std::cyl_bessel_k(0.0, x), 1e-12 * std::cyl_bessel_k(0.0, x)) << x;
        EXPECT_NEAR(bessel_K1(x), std::cyl_bessel_k(1.0, x), 1e-12 * std::cyl_bessel_k(1.0, x)) << x;
    }
}

TEST(Bessel, OscillatorySplit) {
    const auto rep = bessel_oscillatory_split(11, 2.0, 500.0);
    for (double v : rep.max_sqrt_scaled) EXPECT_TRUE(std::isfinite(v));
    // past the transition region 2 pi x ~ nu the scaled derivatives are O(1)
    const auto far = bessel_oscillatory_split(11, 20.0, 500.0);
    for (double v : far.max_sqrt_scaled) EXPECT_LT(v, 1.0);
    EXPECT_LE(rep.max_reconstruction_error, 1e-8);
    EXPECT_LE(rep.max_conjugate_error, 1e-12);
    for (double x : {10.0, 37.5, 200.0}) {
        const cplx zp = bessel_zplus(11, x);
        const cplx rec = std::polar(1.0, 2 * kPi * x) * zp + std::polar(1.0, -2 * kPi * x) * std::conj(zp);
        EXPECT_NEAR(rec.real(), bessel_J(11, 2 * kPi * x), 1e-8);
        EXPECT_NEAR(rec.imag(), 0.0, 1e-12);
    }
    EXPECT_THROW(bessel_zplus(11, 1.0), AsymptoticRegimeRequired);
}

TEST(Gamma, MatchesTgamma) {
    for (double x = 0.1; x < 30.0; x += 0.37) EXPECT_NEAR(gamma(cplx(x)).real(), std::tgamma(x), 1e-12 * std::tgamma(x)) << x;
    for (double x = -4.7; x < 0.0; x += 1.0) EXPECT_NEAR(gamma(cplx(x)).real(), std::tgamma(x), 1e-11 * std::abs(std::tgamma(x))) << x;
    // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
    for (double t : {0.5, 3.0, 20.0}) EXPECT_NEAR(std::norm(gamma(cplx(0.5, t))), kPi / std::cosh(kPi * t), 1e-11 * kPi / std::cosh(kPi * t));
    const cplx z(2.3, -1.7);
    EXPECT_LT(std::abs(gamma(z + 1.0) - z * gamma(z)), 1e-12 * std::abs(gamma(z + 1.0)));
    EXPECT_LT(std::abs(log_gamma(cplx(100.0)) - std::lgamma(100.0)), 1e-10);
}

TEST(Quadrature, GaussLegendreExactOnPolynomials) {
    const GaussRule r = gauss_legendre(15);
    for (int k = 0; k <= 29; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
        EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-14) << k;
    }
}

TEST(Quadrature, GoldenOscillatoryIntegrals) {
    struct Case {
        std::function<cplx(double)> f;
        double a, b, omega;
        cplx exact;
    };
    std::vector<Case> cases;
    for (double w : {10.0, 100.0, 1000.0}) {
        cases.push_back({[w](double x) { return cplx(std::cos(w * x)); }, 0.0, 1.0, w, std::sin(w) / w});
        cases.push_back({[w](double x) { return cplx(x * std::cos(w * x)); }, 0.0, 1.0, w, (std::cos(w) + w * std::sin(w) - 1.0) / (w * w)});
        cases.push_back({[w](double x) { return std::exp(-x) * std::polar(1.0, w * x); }, 0.0, 10.0, w,
                         (1.0 - std::exp(cplx(-10.0, 10.0 * w))) / cplx(1.0, -w)});
    }
    // Fresnel-type: int_0^T x sin(x^2) dx = (1 - cos T^2) / 2
    cases.push_back({[](double x) { return cplx(x * std::sin(x * x)); }, 0.0, 5.0, 10.0, (1.0 - std::cos(25.0)) / 2.0});
    ASSERT_EQ(cases.size(), 10u);
    for (const auto& c : cases) {
        const double w = c.omega;
        const auto res = integrate_oscillatory(c.f, c.a, c.b, [w](double) { return 2 * kPi / w; }, 1e-12);
        EXPECT_TRUE(res.converged);
        EXPECT_LT(std::abs(res.value - c.exact), 1e-9) << w;
    }
    const auto plain = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
    EXPECT_NEAR(plain.value, std::numbers::e - 1.0, 1e-13);
}

TEST(TestFunctions, SupportAndDerivatives) {
    const std::vector<TestFunction> fs{TestFunction::bump(1.0, 2.0), TestFunction::gaussian_bump(10.0, 2.0), TestFunction::log_gaussian(5.0, 0.2),
                                       TestFunction::product(TestFunction::bump(1.0, 3.0), TestFunction::gaussian_bump(2.0, 1.0)),
                                       TestFunction::monomial(TestFunction::bump(1.0, 2.0), 1.0, 2.0), TestFunction::scaled(TestFunction::bump(1.0, 2.0), 3.0)};
    for (const auto& g : fs) {
        const Interval s = g.support();
        EXPECT_EQ(g(s.lo - 1e-3), 0.0);
        EXPECT_EQ(g(s.hi + 1e-3), 0.0);
        for (int i = 1; i <= 100; ++i) {
            const double x = s.lo + s.width() * (0.05 + 0.9 * i / 101.0);
            const double h = 1e-5 * s.width();
            const double fd1 = (g(x + h) - g(x - h)) / (2 * h);
            const double fd2 = (g(x + h) - 2 * g(x) + g(x - h)) / (h * h);
            const double sc1 = std::max(1e-3, std::abs(g.derivative(x, 1)));
            EXPECT_LT(std::abs(fd1 - g.derivative(x, 1)), 1e-6 * sc1 + 1e-9) << x;
            EXPECT_LT(std::abs(fd2 - g.derivative(x, 2)), 1e-3 * std::max(1.0, std::abs(g.derivative(x, 2)))) << x;
        }
    }
    EXPECT_TRUE(TestFunction::zero().is_zero());
    EXPECT_EQ(TestFunction::zero().variation(), 0.0);
    EXPECT_THROW(TestFunction::bump(2.0, 1.0), DomainError);
}

TEST(TestFunctions, MellinScaling) {
    // closed form for the log-gaussian against quadrature, and the scaling law for g(x/s)
    const TestFunction g = TestFunction::log_gaussian(3.0, 0.3);
    const TestFunction b = TestFunction::bump(1.0, 2.0);
    for (cplx s : {cplx(1.0), cplx(0.5, 2.0), cplx(2.0, -1.0)}) {
        const auto f = [&](double x) { return g(x) * std::pow(x, s - 1.0); };
        const Interval sp = g.support();
        const cplx q = integrate_panels(f, sp.lo, sp.hi, sp.width() / 64, 1e-14).value;
        EXPECT_LT(std::abs(g.mellin(s) - q), 1e-9 * std::abs(q));
        const double sc = 2.5;
        const cplx scaled = TestFunction::scaled(b, sc).mellin(s);
        EXPECT_LT(std::abs(scaled - std::pow(sc, s) * b.mellin(s)), 1e-9 * std::abs(scaled));
    }
    const cplx one = b.mellin(1.0), d1 = TestFunction::scaled(b, 2.0).mellin(1.0, 1);
    EXPECT_LT(std::abs(d1 - 2.0 * (std::log(2.0) * one + b.mellin(1.0, 1))), 1e-9);
}

TEST(Delta, IndicatorExamples) {
    const DeltaExpansion D(50.0);
    EXPECT_NEAR(dfi_delta(0, D), 1.0, 1e-3);
    EXPECT_NEAR(dfi_delta(7, D), 0.0, 1e-3);
    EXPECT_NEAR(dfi_delta(-100, D), 0.0, 1e-2);
    for (long n = -100; n <= 100; ++n) ASSERT_NEAR(dfi_delta(n, D), n == 0 ? 1.0 : 0.0, 1e-3) << n;
    EXPECT_THROW(DeltaExpansion(0.5), OutOfRange);
}

TEST(Delta, IndicatorOtherLengths) {
    for (double L : {25.0, 100.0}) {
        const DeltaExpansion D(L);
        for (long n = -static_cast<long>(2 * L); n <= static_cast<long>(2 * L); n += (n > -5 && n < 5 ? 1 : 7))
            ASSERT_NEAR(dfi_delta(n, D), n == 0 ? 1.0 : 0.0, 1e-3) << L << " " << n;
    }
}

TEST(Delta, GProperties) {
    const DeltaExpansion D(50.0);
    std::vector<int> qs;
    for (int q = 1; q <= D.qmax(); ++q) qs.push_back(q);
    const auto rep = g_properties_check(D, qs);
    EXPECT_LT(rep.tail_mass, 1e-9);
    EXPECT_LT(rep.near_one_ratio, 16.0);
    EXPECT_LT(rep.derivative_ratio[0], 16.0);
    EXPECT_LT(rep.l1_ratio, 16.0);
    EXPECT_TRUE(std::isfinite(rep.derivative_ratio[1]));
    EXPECT_TRUE(std::isfinite(rep.decay_ratio));
    EXPECT_NEAR(rep.g_at_origin_q1, 1.0, 0.05);
}

TEST(StationaryPhase, LeadingTerm) {
    const TestFunction g = TestFunction::bump(1.0, 2.0);
    const auto r100 = stationary_phase_compare(quadratic_phase_integral(g, 100.0, 1.5));
    EXPECT_NEAR(r100.t0, 1.5, 1e-12);
    EXPECT_LT(r100.rel_error, 0.05);
    const auto r400 = stationary_phase_compare(quadratic_phase_integral(g, 400.0, 1.5));
    const double order = (r400.abs_error / std::abs(r400.direct)) / r100.rel_error;
    EXPECT_GT(order, 0.25 / 2);
    EXPECT_LT(order, 0.25 * 2);
    const auto z = stationary_phase_compare(quadratic_phase_integral(TestFunction::zero(), 100.0, 1.5));
    EXPECT_EQ(z.direct, cplx(0.0));
    EXPECT_THROW(stationary_phase_compare(quadratic_phase_integral(g, 100.0, 5.0)), NoStationaryPoint);
}

TEST(StationaryPhase, NonstationaryDecay) {
    const TestFunction g = TestFunction::bump(1.0, 2.0);
    const auto rep = nonstationary_decay_check(g, {10, 20, 40, 80, 160, 320});
    for (const auto& row : rep.rows) EXPECT_LE(row.first_derivative_ratio, 1.0);
    EXPECT_LE(rep.slope, -1.9);
    const auto z = nonstationary_decay_check(TestFunction::zero(), {10, 20});
    for (const auto& row : z.rows) EXPECT_EQ(row.magnitude, 0.0);
    EXPECT_NEAR(loglog_slope({1, 2, 4, 8}, {1, 0.25, 0.0625, 0.015625}), -2.0, 1e-12);
}
