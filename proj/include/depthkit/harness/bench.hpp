#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "depthkit/charsum.hpp"
#include "depthkit/expsums.hpp"
#include "depthkit/harness/report.hpp"
#include "depthkit/residue.hpp"

namespace depthkit {

struct BenchRow {
    std::string kernel;
    double size = 0.0;
    double terms = 0.0;
    double seconds = 0.0;
    double rate = 0.0;  // terms per second
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double min_inverse_ratio = 0.0;    // batched over naive throughput, minimum over q >= 1e4
    double charsum_rate = 0.0;         // minimum over the charsum ladder of Kloosterman terms per second
    bool inverse_ok = true;
};

struct BenchOptions {
    double min_seconds = 0.2;          // per measurement
    double required_inverse_ratio = 2.0;
};

namespace detail {

// repeats f until min_seconds have passed; returns (calls, seconds)
template <class F>
std::pair<u64, double> time_loop(F f, double min_seconds) {
    using clk = std::chrono::steady_clock;
    const auto t0 = clk::now();
    u64 calls = 0;
    double dt = 0.0;
    do {
        f();
        ++calls;
        dt = std::chrono::duration<double>(clk::now() - t0).count();
    } while (dt < min_seconds);
    return {calls, dt};
}

inline volatile double bench_sink = 0.0;

} // namespace detail

// The charsum ladder is fixed (p = 5, r = 4, l = 2, q = 1, 2, 4, 8); the q ladder drives
// the Kloosterman and inverse-table kernels.
inline BenchReport bench_kernels(const std::vector<u64>& ladder, const BenchOptions& opt = {}) {
    BenchReport rep;
    if (ladder.empty()) return rep;
    bool any_inverse = false;
    for (u64 q : ladder) {
        const KloostermanKernel K(q);
        i64 a = 1;
        auto [calls, dt] = detail::time_loop(
            [&] {
                detail::bench_sink = detail::bench_sink + K(a, 3);
                a = a % 1000 + 1;
            },
            opt.min_seconds);
        const double terms = static_cast<double>(calls) * static_cast<double>(K.terms());
        rep.rows.push_back({"kloosterman", static_cast<double>(q), terms, dt, terms / dt});
    }
    for (u64 q : ladder) {
        auto [cb, tb] = detail::time_loop([&] { detail::bench_sink = detail::bench_sink + double(inverse_table(q).back()); }, opt.min_seconds);
        auto [cn, tn] = detail::time_loop([&] { detail::bench_sink = detail::bench_sink + double(inverse_table_naive(q).back()); }, opt.min_seconds);
        const double rb = static_cast<double>(cb) * q / tb, rn = static_cast<double>(cn) * q / tn;
        rep.rows.push_back({"inverse-batched", static_cast<double>(q), static_cast<double>(cb) * q, tb, rb});
        rep.rows.push_back({"inverse-naive", static_cast<double>(q), static_cast<double>(cn) * q, tn, rn});
        if (q >= 10'000) {
            const double ratio = rb / rn;
            rep.min_inverse_ratio = any_inverse ? std::min(rep.min_inverse_ratio, ratio) : ratio;
            any_inverse = true;
            if (ratio < opt.required_inverse_ratio) rep.inverse_ok = false;
        }
    }
    bool first = true;
    for (u64 q : {1, 2, 4, 8}) {
        CharsumParams P;
        P.p = 5;
        P.r = 4;
        P.l = 2;
        P.q = q;
        const BruteForceCharsum C(P);
        i64 n2 = 1;
        auto [calls, dt] = detail::time_loop(
            [&] {
                detail::bench_sink = detail::bench_sink + C.value(n2, 1).real();
                n2 = n2 % 7 + 1;
            },
            opt.min_seconds);
        const double terms = static_cast<double>(calls) * static_cast<double>(C.kloosterman_terms());
        rep.rows.push_back({"charsum", static_cast<double>(C.modulus()), terms, dt, terms / dt});
        rep.charsum_rate = first ? terms / dt : std::min(rep.charsum_rate, terms / dt);
        first = false;
    }
    return rep;
}

inline constexpr const char* kBenchCsvHeader = "kernel,size,terms,seconds,terms_per_second";

inline std::string emit_bench(const BenchReport& rep, Format fmt) {
    std::string out;
    if (fmt == Format::Csv) out += std::string(kBenchCsvHeader) + "\n";
    for (const auto& r : rep.rows) {
        if (fmt == Format::Csv) {
            out += r.kernel + "," + format_double(r.size) + "," + format_double(r.terms) + "," + format_double(r.seconds) + "," + format_double(r.rate) + "\n";
        } else {
            out += "{\"kernel\":\"" + r.kernel + "\",\"size\":" + format_double(r.size) + ",\"terms\":" + format_double(r.terms) +
                   ",\"seconds\":" + format_double(r.seconds) + ",\"terms_per_second\":" + format_double(r.rate) + "}\n";
        }
    }
    return out;
}

} // namespace depthkit
