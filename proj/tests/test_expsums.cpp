#include <gtest/gtest.h>

#include <random>

#include "depthkit/expsums.hpp"

using namespace depthkit;

TEST(Expsums, KloostermanExamples) {
    EXPECT_NEAR(kloosterman(1, 1, 5), 2.0 + 2.0 * std::cos(4.0 * M_PI / 5.0), 1e-12);
    EXPECT_NEAR(kloosterman(1, 1, 5), 0.381966, 1e-6);
    for (u64 q : {1u, 2u, 9u, 10u, 97u, 360u}) EXPECT_NEAR(kloosterman(0, 0, q), double(euler_phi(q)), 1e-9);
    EXPECT_NEAR(kloosterman(1, 0, 6), 1.0, 1e-12);
    EXPECT_NEAR(kloosterman(3, -5, 1), 1.0, 0.0);
    EXPECT_LE(std::abs(kloosterman(1, 1, 3)), 2.0 * std::sqrt(3.0));
    EXPECT_THROW(KloostermanKernel(0), DomainError);
}

TEST(Expsums, KernelMatchesDirect) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        const u64 c = rng() % 400 + 1;
        const i64 a = static_cast<i64>(rng() % 2000) - 1000, b = static_cast<i64>(rng() % 2000) - 1000;
        const KloostermanKernel K(c);
        const cplx d = kloosterman_direct(a, b, c);
        EXPECT_LT(std::abs(K.complex_value(a, b) - d), 1e-9);
        EXPECT_NEAR(K(a, b), d.real(), 1e-9);
        EXPECT_NEAR(d.imag(), 0.0, 1e-9);
        EXPECT_NEAR(K(a + static_cast<i64>(c), b - 3 * static_cast<i64>(c)), K(a, b), 1e-9);
    }
}

TEST(Expsums, TwistedMultiplicativity) {
    std::mt19937_64 rng(5);
    int checked = 0;
    while (checked < 200) {
        const u64 q1 = rng() % 499 + 2, q2 = rng() % 40 + 2;
        if (std::gcd(q1, q2) != 1) continue;
        const i64 a = static_cast<i64>(rng() % 1000), b = static_cast<i64>(rng() % 1000);
        const i64 q1b = static_cast<i64>(inv_mod(static_cast<i64>(q1), q2)), q2b = static_cast<i64>(inv_mod(static_cast<i64>(q2), q1));
        const cplx lhs = kloosterman_direct(a, b, q1 * q2);
        const cplx rhs = kloosterman_direct(a * q2b, b * q2b, q1) * kloosterman_direct(a * q1b, b * q1b, q2);
        ASSERT_LT(std::abs(lhs - rhs), 1e-6) << q1 << " " << q2;
        ++checked;
    }
}

TEST(Expsums, Conjugation) {
    for (u64 q : {5u, 12u, 49u, 81u, 210u})
        for (i64 a = -7; a <= 7; ++a)
            for (i64 b = -7; b <= 7; ++b) ASSERT_LT(std::abs(kloosterman_direct(a, b, q) - std::conj(kloosterman_direct(-a, -b, q))), 1e-9);
}

TEST(Expsums, RamanujanExamples) {
    EXPECT_EQ(ramanujan_sum(2, 4), -2);
    for (u64 q : {1u, 7u, 12u, 100u}) EXPECT_EQ(ramanujan_sum(0, q), static_cast<i64>(euler_phi(q)));
    for (u64 p : {3u, 5u, 101u, 199u}) EXPECT_EQ(ramanujan_sum(1, p), -1);
    EXPECT_NEAR(kloosterman(1, 0, 6), double(mobius(6)), 1e-12);
}

TEST(Expsums, RamanujanIdentityExhaustive) {
    for (u64 q = 1; q <= 200; ++q)
        for (i64 h = 0; h < static_cast<i64>(q); ++h) ASSERT_NO_THROW(ramanujan_sum_checked(h, q)) << h << " " << q;
    for (u64 q = 1; q <= 60; ++q)
        for (i64 h = -5; h <= 5; ++h) EXPECT_NEAR(kloosterman(h, 0, q), double(ramanujan_sum(h, q)), 1e-9);
}

TEST(Expsums, WeilBound) {
    EXPECT_LE(weil_ratio(5), 1.0);
    EXPECT_LE(weil_ratio(101), 1.0);
    EXPECT_LE(weil_ratio(3), 1.0);
    EXPECT_GT(weil_ratio(101), 0.5);
    EXPECT_LE(weil_ratio(9973, 2000, 9), 1.0);
    EXPECT_EQ(weil_ratio(9973, 500, 4), weil_ratio(9973, 500, 4));
    EXPECT_THROW(weil_ratio(9), DomainError);
}
