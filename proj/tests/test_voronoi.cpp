#include <gtest/gtest.h>

#include "depthkit/voronoi.hpp"

using namespace depthkit;

namespace {

std::vector<TestFunction> basket() {
    return {TestFunction::log_gaussian(200, 0.15), TestFunction::log_gaussian(300, 0.12), TestFunction::log_gaussian(150, 0.2),
            TestFunction::log_gaussian(400, 0.1), TestFunction::log_gaussian(250, 0.18)};
}

} // namespace

TEST(Coefficients, TauExamples) {
    EXPECT_EQ(ramanujan_tau(1), 1);
    EXPECT_EQ(ramanujan_tau(2), -24);
    EXPECT_EQ(ramanujan_tau(3), 252);
    EXPECT_EQ(ramanujan_tau(6), -24 * 252);
    EXPECT_EQ(ramanujan_tau(11), 534612);
    EXPECT_THROW(ramanujan_tau(0), DomainError);
}

TEST(Coefficients, HeckeAndDeligne) {
    const CoefficientSeries cs(10'000);
    for (u64 m = 1; m <= 10'000; ++m) {
        ASSERT_LE(std::abs(cs.lambda(m)), double(cs.d(m)) * (1 + 1e-12)) << m;
        for (u64 n = 1; m * n <= 10'000 && n <= 100; ++n)
            if (std::gcd(m, n) == 1) {
                ASSERT_EQ(cs.tau(m * n), cs.tau(m) * cs.tau(n)) << m << " " << n;
            }
    }
    // Hecke relation at a prime power
    EXPECT_EQ(cs.tau(4), cs.tau(2) * cs.tau(2) - (i128{1} << 11));
}

TEST(Coefficients, D3Counts) {
    const CoefficientSeries cs(3000);
    for (u64 n = 1; n <= 3000; ++n) {
        u64 c = 0;
        for (u64 a : divisors(n)) c += divisor_count(n / a);
        ASSERT_EQ(cs.d3(n), c);
    }
    u64 running = 0;
    for (u64 x = 1; x <= 3000; ++x) {
        running += cs.d3(x);
        ASSERT_EQ(d3_hyperbolic_sum(x), running) << x;
    }
    EXPECT_EQ(d3_coefficient(1, 1), 1u);
    EXPECT_EQ(d3_coefficient(1, 6), cs.d3(6));
    EXPECT_EQ(d3_coefficient(6, 1), cs.d3(6));
}

TEST(Voronoi, Gl2Example) {
    const auto r = gl2_voronoi_check(1, 3, TestFunction::gaussian_bump(1000, 200), 1e-4);
    EXPECT_LE(r.rel_error, 1e-4);
    const auto t = gl2_voronoi_check(0, 1, TestFunction::gaussian_bump(1000, 50), 1e-4);
    EXPECT_LE(t.rel_error, 1e-4);
    const auto z = gl2_voronoi_check(1, 3, TestFunction::zero());
    EXPECT_EQ(z.lhs, cplx(0.0));
    EXPECT_EQ(z.rhs, cplx(0.0));
    EXPECT_THROW(gl2_voronoi_check(3, 6, TestFunction::gaussian_bump(1000, 50)), NotCoprime);
}

TEST(Voronoi, DivisorExampleAndMainTerm) {
    const TestFunction g = TestFunction::gaussian_bump(1000, 200);
    const auto r = divisor_voronoi_check(1, 3, g, true, 1e-4);
    EXPECT_LE(r.rel_error, 1e-4);
    const auto d = divisor_voronoi_check(1, 3, g, false, 1e-4);
    EXPECT_NEAR(std::abs(d.lhs - d.rhs), std::abs(r.main_term), 1e-3 * std::abs(r.main_term));
    const auto z = divisor_voronoi_check(1, 3, TestFunction::zero());
    EXPECT_EQ(z.lhs, cplx(0.0));
    EXPECT_EQ(z.rhs, cplx(0.0));
}

TEST(Gl3, ContourIndependenceAndDecay) {
    const TestFunction g = TestFunction::log_gaussian(200, 0.15);
    const double y0 = gl3_decay_threshold(g);
    for (int sign : {-1, 1}) {
        for (double y : {0.01 * y0, 0.1 * y0, y0}) EXPECT_LT(gl3_contour_check(y, g, sign).rel_diff, 1e-8) << y;
        const auto d = gl3_decay_check(g, sign);
        EXPECT_LE(d.slope, -6.0);
        EXPECT_LE(d.ratio, 1e-8);
    }
    EXPECT_EQ(gl3_G_transform(1.0, TestFunction::zero(), 1), cplx(0.0));
}

TEST(Gl3, D3ResidualFit) {
    const auto rep = d3_voronoi_residual_check(1, 1, basket());
    EXPECT_LE(rep.fit_residual, 1e-4);
    // at c = 1 the fit recovers the residue of zeta^3 g~ at s = 1
    EXPECT_NEAR(rep.coeff[2], 0.5, 1e-6);
    EXPECT_NEAR(rep.coeff[1], 3 * 0.57721566490153286, 1e-6);
    EXPECT_NEAR(rep.predicted_g2, 0.25, 1e-12);
    EXPECT_THROW(d3_voronoi_residual_check(1, 1, {basket()[0], basket()[0], basket()[0], basket()[0]}), RankDeficientBasket);
}

TEST(Gl3, SecondMoment) {
    const auto rep = second_moment_check({0.5, 1000, 2000});
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_EQ(rep.rows[0].sum, 0.0);
    EXPECT_TRUE(std::isfinite(rep.rows[1].ratio));
    EXPECT_GT(rep.rows[1].ratio, 0.0);
    double direct = 0.0;
    for (u64 n1 = 1; n1 * n1 <= 1000; ++n1)
        for (u64 n2 = 1; n1 * n1 * n2 <= 1000; ++n2) direct += std::pow(double(d3_coefficient(n1, n2)), 2);
    EXPECT_EQ(rep.rows[1].sum, direct);
}
