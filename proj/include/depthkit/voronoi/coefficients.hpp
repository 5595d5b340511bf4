#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "depthkit/errors.hpp"
#include "depthkit/residue.hpp"
#include "depthkit/sieve.hpp"

namespace depthkit {

using i128 = __int128;

inline constexpr u64 kTauCap = 100'000;

// tau(1..n) from q prod (1-q^k)^24 = q (prod (1-q^k)^3)^8, the cube being the
// sparse Jacobi series sum (-1)^k (2k+1) q^(k(k+1)/2); each factor is applied as
// a sparse multiplication so the cost is O(n^1.5).
inline std::vector<i128> tau_table(u64 n) {
    if (n > kTauCap) throw TooLarge("ramanujan_tau bound " + std::to_string(n));
    const u64 len = n;  // coefficients of q^0 .. q^(n-1) of eta^24 / q
    std::vector<std::pair<u64, i64>> jac;
    for (u64 k = 0; k * (k + 1) / 2 < len; ++k) jac.emplace_back(k * (k + 1) / 2, (k % 2 ? -1 : 1) * static_cast<i64>(2 * k + 1));
    std::vector<i128> cur(len, 0), next(len);
    cur[0] = 1;
    for (int f = 0; f < 8; ++f) {
        std::fill(next.begin(), next.end(), 0);
        for (u64 i = 0; i < len; ++i) {
            if (cur[i] == 0) continue;
            for (auto [e, c] : jac) {
                if (i + e >= len) break;
                next[i + e] += cur[i] * c;
            }
        }
        std::swap(cur, next);
    }
    std::vector<i128> tau(n + 1, 0);
    for (u64 m = 1; m <= n; ++m) tau[m] = cur[m - 1];
    return tau;
}

// Immutable coefficient caches: Delta's tau and lambda, d, d3.
class CoefficientSeries {
public:
    explicit CoefficientSeries(u64 bound) : bound_(bound), sieve_(shared_sieve(static_cast<std::uint32_t>(std::max<u64>(bound, 2)))) {
        if (bound > kTauCap) throw TooLarge("coefficient bound " + std::to_string(bound));
        tau_ = tau_table(bound);
        lambda_.resize(bound + 1, 0.0);
        for (u64 m = 1; m <= bound; ++m) lambda_[m] = static_cast<double>(tau_[m]) / std::pow(static_cast<double>(m), 5.5);
    }

    u64 bound() const { return bound_; }
    i128 tau(u64 n) const { return tau_.at(n); }
    double lambda(u64 n) const { return lambda_.at(n); }
    u64 d(u64 n) const { return n <= sieve_->bound() ? sieve_->d(static_cast<std::uint32_t>(n)) : divisor_count(n); }
    u64 d3(u64 n) const { return sieve_->d3(static_cast<std::uint32_t>(n)); }

private:
    u64 bound_;
    std::shared_ptr<const Sieve> sieve_;
    std::vector<i128> tau_;
    std::vector<double> lambda_;
};

inline i128 ramanujan_tau(u64 n) {
    if (n == 0) throw DomainError("ramanujan_tau needs n >= 1");
    if (n > kTauCap) throw TooLarge("ramanujan_tau bound " + std::to_string(n));
    static std::mutex mu;
    static std::vector<i128> cache;
    std::lock_guard lk(mu);
    if (cache.size() <= n) cache = tau_table(std::max<u64>(n, std::min<u64>(kTauCap, std::max<u64>(1024, 2 * (cache.size())))));
    return cache[n];
}

inline double delta_lambda(u64 n) { return static_cast<double>(ramanujan_tau(n)) / std::pow(static_cast<double>(n), 5.5); }

// sum_{d1 | k2} #{d2 : d1 d2 | k2, (d2, k1) = 1}
inline u64 sigma00(u64 k1, u64 k2) {
    u64 s = 0;
    for (u64 d1 : divisors(k2))
        for (u64 d2 : divisors(k2 / d1))
            if (std::gcd(d2, k1) == 1) ++s;
    return s;
}

// d3 Fourier coefficient A(n1, n2) = sum_{n3 | n1} sum_{n4 | n1/n3} sigma00(n1/(n3 n4), n2)
inline u64 d3_coefficient(u64 n1, u64 n2) {
    u64 s = 0;
    for (u64 n3 : divisors(n1))
        for (u64 n4 : divisors(n1 / n3)) s += sigma00(n1 / (n3 * n4), n2);
    return s;
}

// sum_{n <= x} d3(n) via sum_{a <= x} sum_{b <= x/a} floor(x/(ab))
inline u64 d3_hyperbolic_sum(u64 x) {
    u64 s = 0;
    for (u64 a = 1; a <= x; ++a)
        for (u64 b = 1; a * b <= x; ++b) s += x / (a * b);
    return s;
}

} // namespace depthkit
