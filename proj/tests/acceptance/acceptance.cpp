// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "depthkit/harness.hpp"

using namespace depthkit;

namespace {

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t0) { return std::chrono::duration<double>(clk::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::vector<VerificationReport> run(const std::string& verifier, const std::string& grid = "") {
    RunConfig cfg;
    cfg.verifier = verifier;
    if (!grid.empty()) {
        cfg.grid = parse_grid(grid);
        cfg.grid_given = true;
    }
    return run_verifier(cfg);
}

std::vector<VerificationReport> only(const std::vector<VerificationReport>& reps, const std::vector<std::string>& checks) {
    std::vector<VerificationReport> out;
    for (const auto& r : reps)
        for (const auto& c : checks)
            if (r.check == c) out.push_back(r);
    return out;
}

// folds reports into the outcome: every report must pass and be self-consistent
void absorb(Outcome& o, const std::vector<VerificationReport>& reps, std::size_t at_least = 1) {
    std::size_t failed = 0;
    for (const auto& r : reps) failed += (r.pass && consistent(r)) ? 0 : 1;
    if (failed || reps.size() < at_least) o.pass = false;
    for (const auto& s : summarize(reps)) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s%s/%s %zu/%zu worst %.3g (thr %.3g)", o.detail.empty() ? "" : "; ", s.verifier.c_str(), s.check.c_str(),
                      s.total - s.failed, s.total, s.worst, s.threshold);
        o.detail += buf;
    }
    if (reps.size() < at_least) o.detail += "; only " + std::to_string(reps.size()) + " reports";
}

void note(Outcome& o, bool ok, const std::string& what) {
    if (!ok) o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what + (ok ? "" : " [failed]");
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::vector<PrimePower> prime_powers_up_to(u64 bound) {
    std::vector<PrimePower> out;
    for (u64 p = 3; p <= bound; p += 2) {
        if (!is_prime(p)) continue;
        for (int r = 1; ipow(static_cast<i64>(p), r) <= static_cast<i64>(bound); ++r) out.push_back(PrimePower::make(p, r));
    }
    return out;
}

Outcome c1() {
    Outcome o;
    const auto t0 = clk::now();
    absorb(o, only(run("charsum", "p=3,5;r=4;l=2;l1=0;q=1,2,4;k=1;n1=1;n2=1..5;m=1..5;sign=-1,1;chi=-1"), {"oracle"}));
    const double dt = seconds_since(t0);
    note(o, dt <= 120.0, fmt("%.1f s (limit 120)", dt));
    return o;
}

Outcome c2() {
    Outcome o;
    const auto reps = run("charsum",
                          "p=3;r=4;l=2;l1=0;q=1,2;k=1;n1=3;n2=1,2;m=1..3;sign=1;chi=1"
                          "|p=3;r=4;l=2;l1=0;q=27,54;k=1;n1=1;n2=1,2;m=1..3;sign=1;chi=1");
    std::vector<VerificationReport> ramified, deep;
    for (const auto& r : only(reps, {"vanish"})) (param(r.params, "q") >= 27 ? deep : ramified).push_back(r);
    Outcome a, b;
    absorb(a, ramified, 10);
    absorb(b, deep, 10);
    o.pass = a.pass && b.pass;
    o.detail = "n1 ramified: " + a.detail + " | (q,p)>1 deep branch: " + b.detail;
    return o;
}

Outcome c3() {
    Outcome o;
    absorb(o, run("bound-zero"), 50);
    return o;
}

Outcome c4() {
    Outcome o;
    const auto t0 = clk::now();
    absorb(o, run("counting"));
    const double dt = seconds_since(t0);
    note(o, dt <= 300.0, fmt("%.1f s (limit 300)", dt));
    return o;
}

Outcome c5() {
    Outcome o;
    std::size_t chars = 0, bad = 0;
    double worst = 0.0;
    for (const auto& pp : prime_powers_up_to(10'000)) {
        const auto taus = gauss_sums_all(pp);
        for (u64 k = 0; k < pp.phi; ++k) {
            if (k % pp.p == 0) continue;
            const double dev = std::abs(std::norm(taus[k]) - double(pp.modulus)) / double(pp.modulus);
            worst = std::max(worst, dev);
            ++chars;
            if (!(dev <= 1e-6)) ++bad;
        }
    }
    note(o, bad == 0, std::to_string(chars) + " primitive characters, worst ||tau|^2 - p^r|/p^r " + fmt("%.3g", worst));

    std::size_t induced = 0;
    double worst_induced = 0.0;
    for (const auto& pp : prime_powers_up_to(200)) {
        for (const auto& chi : primitive_characters(pp)) {
            for (int s : {pp.r + 1, pp.r + 2}) {
                if (induced >= 100 || ipow(static_cast<i64>(pp.p), s) > 50'000) continue;
                worst_induced = std::max(worst_induced, std::abs(gauss_sum(induce(chi, s))));
                ++induced;
            }
            if (induced >= 100) break;
        }
    }
    note(o, induced >= 100 && worst_induced <= 1e-9, std::to_string(induced) + " induced, worst |tau| " + fmt("%.3g", worst_induced));

    std::size_t constants = 0;
    bool ok = true;
    for (auto [p, r] : std::vector<std::pair<u64, int>>{{5, 2}, {3, 3}, {5, 4}, {3, 6}}) {
        const PrimePower pp = PrimePower::make(p, r);
        for (const auto& chi : primitive_characters(pp)) {
            for (int t = (r + 1) / 2; t <= r; ++t) {
                try {
                    const auto A = postnikov_constant(chi, t);  // verifies every v internally
                    if (t < r && A.value.value() % p == 0) ok = false;
                    ++constants;
                } catch (const Error&) {
                    ok = false;
                }
            }
        }
    }
    note(o, ok, std::to_string(constants) + " Postnikov constants over 25, 27, 625, 729");
    return o;
}

Outcome c6() {
    Outcome o;
    std::size_t n = 0;
    bool ok = true;
    for (u64 q = 1; q <= 200; ++q)
        for (i64 h = 0; h < static_cast<i64>(q); ++h) {
            try {
                ramanujan_sum_checked(h, q, 1e-9);
            } catch (const Error&) {
                ok = false;
            }
            ++n;
        }
    note(o, ok, std::to_string(n) + " (h, q) pairs");
    return o;
}

Outcome c7() {
    Outcome o;
    const auto t0 = clk::now();
    absorb(o, run("delta"));
    absorb(o, run("g-properties"));
    const double dt = seconds_since(t0);
    note(o, dt <= 60.0, fmt("%.1f s (limit 60)", dt));
    return o;
}

Outcome c8() {
    Outcome o;
    absorb(o, run("voronoi-gl2"), 9);
    absorb(o, run("voronoi-divisor"), 18);
    return o;
}

Outcome c9() {
    Outcome o;
    absorb(o, run("gl3-decay"));
    const auto d3 = run("d3-voronoi");
    absorb(o, only(d3, {"fit", "g2-coefficient"}), 6);
    return o;
}

Outcome c10() {
    Outcome o;
    absorb(o, run("stationary-phase"));
    return o;
}

Outcome c11() {
    Outcome o;
    absorb(o, run("exponent"), 3);
    return o;
}

Outcome c12() {
    Outcome o;
    note(o, ramanujan_tau(2) == -24, "tau(2) = " + std::to_string(static_cast<long long>(ramanujan_tau(2))));
    note(o, ramanujan_tau(6) == -6048, "tau(6) = " + std::to_string(static_cast<long long>(ramanujan_tau(6))));
    const CoefficientSeries cs(10'000);
    bool deligne = true, hecke = true;
    for (u64 n = 1; n <= 10'000; ++n) {
        const long double t = static_cast<long double>(cs.tau(n));
        if (!(t * t <= static_cast<long double>(cs.d(n)) * cs.d(n) * std::pow(static_cast<long double>(n), 11.0L))) deligne = false;
        for (u64 m = 2; m * n <= 10'000 && m <= 50; ++m)
            if (std::gcd(m, n) == 1 && cs.tau(m * n) != cs.tau(m) * cs.tau(n)) hecke = false;
    }
    note(o, deligne, "Deligne bound n <= 1e4");
    note(o, hecke, "Hecke multiplicativity");
    const auto t0 = clk::now();
    u64 running = 0;
    bool d3ok = true;
    for (u64 x = 1; x <= 10'000; ++x) {
        running += cs.d3(x);
        if (d3_hyperbolic_sum(x) != running) d3ok = false;
    }
    note(o, d3ok, "d3 hyperbolic sum exact for x <= 1e4 (" + fmt("%.1f s", seconds_since(t0)) + ")");
    return o;
}

Outcome c13(clk::time_point start) {
    Outcome o;
    const BenchReport rep = bench_kernels({1000, 10000, 100000});
    note(o, rep.charsum_rate >= 1e6, fmt("charsum %.3g Kloosterman terms/s", rep.charsum_rate));
    note(o, rep.inverse_ok, fmt("batched/naive inverse %.3g", rep.min_inverse_ratio));
    const double total = seconds_since(start);
    note(o, total <= 900.0, fmt("suite wall time %.1f s (limit 900)", total));
    return o;
}

} // namespace

int main() {
    const auto start = clk::now();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"C1 charsum oracle equivalence", c1},
        {"C2 vanishing cases", c2},
        {"C3 post-Poisson n2 = 0 structure", c3},
        {"C4 counting claim", c4},
        {"C5 character infrastructure", c5},
        {"C6 Ramanujan-sum identity", c6},
        {"C7 delta expansion", c7},
        {"C8 GL(2) Voronoi", c8},
        {"C9 GL(3) and d3", c9},
        {"C10 stationary phase", c10},
        {"C11 exponent optimizer", c11},
        {"C12 coefficients", c12},
        {"C13 performance", [start] { return c13(start); }},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = clk::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("%s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
