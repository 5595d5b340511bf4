#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "depthkit/errors.hpp"

namespace depthkit {

inline constexpr std::uint32_t kSieveCap = 10'000'000;

// Smallest-prime-factor sieve with multiplicative functions derived from it.
class Sieve {
public:
    explicit Sieve(std::uint32_t n) : n_(n), spf_(n + 1, 0), mu_(n + 1, 0), d_(n + 1, 0), d3_(n + 1, 0) {
        std::vector<std::uint32_t> primes;
        if (n >= 1) {
            mu_[1] = 1;
            d_[1] = 1;
            d3_[1] = 1;
        }
        // e_[i] = exponent of spf in i, rest_[i] = i with spf-part removed
        std::vector<std::uint8_t> e(n + 1, 0);
        std::vector<std::uint32_t> rest(n + 1, 1);
        for (std::uint32_t i = 2; i <= n; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = i;
                primes.push_back(i);
                e[i] = 1;
                rest[i] = 1;
            }
            for (std::uint32_t p : primes) {
                std::uint64_t ip = static_cast<std::uint64_t>(i) * p;
                if (p > spf_[i] || ip > n) break;
                spf_[ip] = p;
                if (p == spf_[i]) {
                    e[ip] = static_cast<std::uint8_t>(e[i] + 1);
                    rest[ip] = rest[i];
                } else {
                    e[ip] = 1;
                    rest[ip] = i;
                }
            }
            const std::uint32_t k = e[i], r = rest[i];
            mu_[i] = k > 1 ? 0 : static_cast<std::int8_t>(-mu_[r]);
            d_[i] = (k + 1) * d_[r];
            d3_[i] = static_cast<std::uint32_t>((k + 1) * (k + 2) / 2) * d3_[r];
        }
    }

    std::uint32_t bound() const { return n_; }
    int mobius(std::uint32_t n) const { return mu_.at(n); }
    std::uint32_t d(std::uint32_t n) const { return d_.at(n); }
    std::uint32_t d3(std::uint32_t n) const { return d3_.at(n); }
    std::uint32_t spf(std::uint32_t n) const { return spf_.at(n); }

private:
    std::uint32_t n_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint32_t> d_;
    std::vector<std::uint32_t> d3_;
};

// Shared sieve, grown to at least n on demand; the returned object is never mutated.
inline std::shared_ptr<const Sieve> shared_sieve(std::uint32_t n) {
    if (n > kSieveCap) throw TooLarge("sieve bound " + std::to_string(n));
    static std::mutex mu;
    static std::shared_ptr<const Sieve> current;
    std::lock_guard<std::mutex> lock(mu);
    if (!current || current->bound() < n) {
        std::uint32_t target = std::max<std::uint32_t>(n, current ? std::min<std::uint32_t>(2 * current->bound(), kSieveCap) : 1024);
        current = std::make_shared<const Sieve>(target);
    }
    return current;
}

} // namespace depthkit
