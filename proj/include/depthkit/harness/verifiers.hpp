#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "depthkit/analytic.hpp"
#include "depthkit/charsum.hpp"
#include "depthkit/harness/config.hpp"
#include "depthkit/harness/grid.hpp"
#include "depthkit/harness/report.hpp"
#include "depthkit/harness/runner.hpp"
#include "depthkit/voronoi.hpp"

namespace depthkit {

struct VerifierContext {
    double tolerance = 0.0;
    double ratio_ceiling = 16.0;
    u64 seed = 1;
};

struct Verifier {
    std::string name;
    std::string summary;
    std::string default_grid;
    double tolerance = 0.0;       // primary tolerance
    double ratio_ceiling = 16.0;  // ceiling for measured implied constants
    // reasons a tuple is rejected; empty when it is valid
    std::function<std::vector<std::string>(const Tuple&)> check;
    std::function<std::vector<Task>(const std::vector<Tuple>&, const VerifierContext&)> plan;
};

// GL(2) Voronoi test functions, by index
inline TestFunction voronoi_test_function(int i) {
    switch (i) {
    case 0: return TestFunction::gaussian_bump(1000.0, 50.0);
    case 1: return TestFunction::gaussian_bump(1500.0, 40.0);
    case 2: return TestFunction::gaussian_bump(1000.0, 25.0);
    case 3: return TestFunction::gaussian_bump(1000.0, 200.0);
    default: throw InvalidGrid("voronoi test function index " + std::to_string(i) + " (0..3)");
    }
}

inline constexpr int kVoronoiFunctions = 4;

// log-gaussians: Mellin transforms decay like exp(-w^2 tau^2 / 2)
inline std::vector<TestFunction> gl3_basket() {
    return {TestFunction::log_gaussian(200.0, 0.15), TestFunction::log_gaussian(300.0, 0.12), TestFunction::log_gaussian(150.0, 0.2),
            TestFunction::log_gaussian(400.0, 0.1), TestFunction::log_gaussian(250.0, 0.18)};
}

inline constexpr double kMainTermGuard = 100.0;

namespace detail {

template <class F>
std::vector<std::string> reasons_of(F f) {
    try {
        f();
    } catch (const std::exception& e) {
        return {e.what()};
    }
    return {};
}

inline CharsumParams charsum_params(const Tuple& t) {
    CharsumParams P;
    P.p = static_cast<u64>(iparam(t, "p"));
    P.r = static_cast<int>(iparam(t, "r"));
    P.l = static_cast<int>(iparam(t, "l"));
    P.l1 = static_cast<int>(iparam(t, "l1"));
    P.q = static_cast<u64>(iparam(t, "q"));
    P.k = static_cast<u64>(iparam(t, "k"));
    P.n1 = static_cast<u64>(iparam(t, "n1"));
    P.n2 = iparam(t, "n2");
    P.m = iparam(t, "m");
    P.sign = static_cast<int>(iparam(t, "sign"));
    const i64 chi = iparam(t, "chi");
    P.chi = chi < 0 ? 1 : static_cast<u64>(chi);
    return P;
}

inline void check_prime(u64 p) {
    if (p < 3 || !is_prime(p)) throw DomainError("p must be an odd prime");
}

inline PoissonParams poisson_params(const Tuple& t, bool with_n2) {
    PoissonParams pp;
    pp.base.p = static_cast<u64>(iparam(t, "p"));
    check_prime(pp.base.p);
    pp.base.r = static_cast<int>(iparam(t, "r"));
    pp.base.l = static_cast<int>(iparam(t, "l"));
    pp.base.l1 = static_cast<int>(iparam(t, "l1"));
    pp.base.chi = static_cast<u64>(iparam(t, "chi"));
    pp.base.sign = static_cast<int>(iparam(t, "sign"));
    pp.q1 = static_cast<u64>(iparam(t, "q1"));
    pp.q2a = static_cast<u64>(iparam(t, "q2a"));
    pp.q2b = static_cast<u64>(iparam(t, "q2b"));
    pp.m = iparam(t, "m");
    pp.mp = iparam(t, "mp");
    pp.n2 = with_n2 ? iparam(t, "n2") : 0;
    if (pp.q1 == 0 || pp.q2a == 0 || pp.q2b == 0) throw DomainError("q1, q2a, q2b must be positive");
    return pp;
}

inline void check_poisson(const PoissonParams& pp) {
    const CharsumParams a = pp.side_a(), b = pp.side_b();
    a.validate();
    b.validate();
    if (a.term_estimate() > kCharsumTermCap || b.term_estimate() > kCharsumTermCap) throw TooLarge("charsum term count");
    if (pp.big_modulus() > kPoissonModulusCap) throw TooLarge("post-Poisson modulus " + std::to_string(pp.big_modulus()));
}

inline double pw(double b, double e) { return std::pow(b, e); }

inline std::string fmt(double x) { return format_double(x); }

inline std::vector<double> unique_values(const std::vector<Tuple>& tuples, const std::string& key) {
    std::set<double> s;
    for (const auto& t : tuples) s.insert(param(t, key));
    return {s.begin(), s.end()};
}

// ---- charsum -------------------------------------------------------------

inline std::vector<Task> plan_charsum(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    // one task per (p, r, l, l1, q, k, n1, m, chi): n2 and sign reuse the precomputed sums
    std::map<std::vector<double>, std::vector<std::pair<i64, int>>> groups;
    std::map<std::vector<double>, CharsumParams> base;
    for (const auto& t : tuples) {
        CharsumParams P = charsum_params(t);
        std::vector<i64> chis;
        if (iparam(t, "chi") < 0) {
            for (const auto& c : primitive_characters(P.prime_power())) chis.push_back(static_cast<i64>(c.index()));
        } else {
            chis.push_back(iparam(t, "chi"));
        }
        for (i64 c : chis) {
            P.chi = static_cast<u64>(c);
            const std::vector<double> key = {double(P.p), double(P.r), double(P.l), double(P.l1), double(P.q), double(P.k), double(P.n1),
                                             double(P.m), double(c)};
            auto& v = groups[key];
            if (std::find(v.begin(), v.end(), std::make_pair(P.n2, P.sign)) == v.end()) v.emplace_back(P.n2, P.sign);
            base[key] = P;
        }
    }
    std::vector<Task> tasks;
    for (const auto& [key, ns] : groups) {
        const CharsumParams P = base.at(key);
        auto params_of = [P](i64 n2, int sign) {
            return ParamList{{"p", double(P.p)}, {"r", double(P.r)},   {"l", double(P.l)},    {"l1", double(P.l1)},
                             {"q", double(P.q)}, {"k", double(P.k)},   {"n1", double(P.n1)},  {"n2", double(n2)},
                             {"m", double(P.m)}, {"sign", double(sign)}, {"chi", double(P.chi)}};
        };
        Task t;
        t.verifier = "charsum";
        t.check = "oracle";
        t.params = params_of(ns.front().first, ns.front().second);
        const double tol = cx.tolerance;
        t.run = [P, ns, tol, params_of] {
            std::vector<VerificationReport> out;
            const BruteForceCharsum brute(P);
            std::unique_ptr<ReducedCharsum> red;
            std::string err;
            try {
                red = std::make_unique<ReducedCharsum>(P);
            } catch (const Error& e) {
                err = e.what();
            }
            const double scale = pw(double(P.p), (P.r + P.l - P.l1) / 2.0) * double(P.q);
            for (auto [n2, sign] : ns) {
                const cplx b = brute.value(n2, sign);
                if (!red) {
                    out.push_back(make_report("charsum", "oracle", params_of(n2, sign), b, NAN, Metric::Abs, tol * scale, err));
                } else if (red->vanishes()) {
                    out.push_back(make_report("charsum", "vanish", params_of(n2, sign), b, 0.0, Metric::Abs, tol, "closed form vanishes"));
                } else {
                    out.push_back(make_report("charsum", "oracle", params_of(n2, sign), b, red->value(n2, sign), Metric::Abs, tol * scale));
                }
            }
            return out;
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

inline std::vector<std::string> check_charsum(const Tuple& t) {
    return reasons_of([&] {
        const CharsumParams P = charsum_params(t);
        check_prime(P.p);
        if (iparam(t, "chi") < -1) throw DomainError("chi must be an index or -1 (all primitive)");
        P.validate();
        if (P.term_estimate() > kCharsumTermCap) throw TooLarge("charsum term count " + std::to_string(P.term_estimate()));
    });
}

// ---- cbeta ---------------------------------------------------------------

inline CharsumParams cbeta_params(const Tuple& t) {
    CharsumParams P;
    P.p = static_cast<u64>(iparam(t, "p"));
    P.r = static_cast<int>(iparam(t, "r"));
    P.l = static_cast<int>(iparam(t, "l"));
    P.l1 = static_cast<int>(iparam(t, "l1"));
    P.q = static_cast<u64>(iparam(t, "q"));
    P.m = iparam(t, "m");
    P.chi = static_cast<u64>(iparam(t, "chi"));
    return P;
}

inline std::vector<std::string> check_cbeta(const Tuple& t) {
    return reasons_of([&] {
        const CharsumParams P = cbeta_params(t);
        check_prime(P.p);
        P.validate();
        if (P.r % 2) throw UnsupportedParity("odd r");
        if (P.q % P.p == 0) throw Unsupported("cbeta needs (q, p) = 1");
        if (iparam(t, "u") < 0) throw DomainError("u must be non-negative");
    });
}

inline std::vector<Task> plan_cbeta(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    std::vector<Task> tasks;
    for (const auto& tp : tuples) {
        Task t{"cbeta", "oracle", tp, {}};
        const double tol = cx.tolerance;
        t.run = [tp, tol] {
            const CharsumParams P = cbeta_params(tp);
            const CbetaPair c = cbeta_pair(P, static_cast<u64>(iparam(tp, "u")));
            return std::vector<VerificationReport>{
                make_report("cbeta", "oracle", tp, c.brute, c.reduced, Metric::Abs, tol * pw(double(P.p), P.r / 2.0))};
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

// ---- post-Poisson --------------------------------------------------------

inline double poisson_scale(const PoissonParams& pp) {
    const CharsumParams a = pp.side_a();
    return pw(double(a.p), a.r + 2 * (a.l - a.l1)) * double(pp.q1 * pp.q2a * pp.q2b);
}

inline std::vector<std::string> check_post_poisson(const Tuple& t) {
    return reasons_of([&] {
        const PoissonParams pp = poisson_params(t, true);
        check_poisson(pp);
        const CharsumParams a = pp.side_a(), b = pp.side_b();
        if (a.r % 2 || (a.l - a.l1) % 2) throw UnsupportedParity("post-Poisson way (ii) needs r and l - l1 even");
        if (a.lp() != 0 || b.lp() != 0) throw Unsupported("post-Poisson way (ii) needs (q, p) = 1");
    });
}

inline std::vector<Task> plan_post_poisson(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    std::vector<Task> tasks;
    for (const auto& tp : tuples) {
        Task t{"post-poisson", "ways", tp, {}};
        const double tol = cx.tolerance;
        t.run = [tp, tol] {
            const PoissonParams pp = poisson_params(tp, true);
            const PoissonResult r = post_poisson_sum(pp, true);
            return std::vector<VerificationReport>{make_report("post-poisson", "ways", tp, r.direct, r.reduced, Metric::Abs,
                                                               tol * poisson_scale(pp), "modulus=" + std::to_string(r.modulus))};
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

// ---- bound-zero ----------------------------------------------------------

inline std::vector<std::string> check_bound_zero(const Tuple& t) {
    return reasons_of([&] { check_poisson(poisson_params(t, false)); });
}

inline std::vector<Task> plan_bound_zero(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    std::vector<Task> tasks;
    for (const auto& tp : tuples) {
        Task t{"bound-zero", "bound", tp, {}};
        const double tol = cx.tolerance, ceil = cx.ratio_ceiling;
        t.run = [tp, tol, ceil] {
            const PoissonParams pp = poisson_params(tp, false);
            const BoundZeroRow row = verify_bound_zero({pp}, tol).rows.front();
            const CharsumParams a = pp.side_a();
            const bool forced = pp.q2a != pp.q2b || row.bound == 0.0;
            if (forced) {
                const double scale = pw(double(a.p), a.r + 2 * (a.l - a.l1));
                return std::vector<VerificationReport>{make_report("bound-zero", "vanish", tp, row.value, 0.0, Metric::Abs, tol * scale,
                                                                   pp.q2a != pp.q2b ? "q2' != q2''" : "p^(r-l+l1) does not divide m - m'")};
            }
            return std::vector<VerificationReport>{make_report("bound-zero", "bound", tp, row.value, row.bound, Metric::Ratio, ceil)};
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

// ---- counting ------------------------------------------------------------

inline std::vector<std::string> check_counting(const Tuple& t) {
    return reasons_of([&] {
        const PoissonParams pp = poisson_params(t, true);
        check_poisson(pp);
        counting_system(pp);
    });
}

inline std::vector<Task> plan_counting(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    std::vector<Task> tasks;
    for (const auto& tp : tuples) {
        Task t{"counting", "count", tp, {}};
        const double ceil = cx.ratio_ceiling;
        const u64 seed = cx.seed;
        t.run = [tp, ceil, seed] {
            const PoissonParams pp = poisson_params(tp, true);
            const CountingRow row = count_solutions(pp, seed);
            auto flag = [](bool ok) { return cplx(ok ? 0.0 : 1.0); };
            return std::vector<VerificationReport>{
                make_report("counting", "count", tp, double(row.count), 1.0, Metric::Ratio, ceil),
                make_report("counting", "gamma-roots", tp, double(row.max_gamma_roots), 1.0, Metric::Ratio, 2.0),
                make_report("counting", "v0-unique", tp, flag(row.v0_unique), 0.0, Metric::Value, 0.0),
                make_report("counting", "v0-congruence", tp, flag(row.v0_congruence), 0.0, Metric::Value, 0.0),
                make_report("counting", "sextic", tp, flag(row.sextic_identity), 0.0, Metric::Value, 0.0)};
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

// ---- delta / g-properties ------------------------------------------------

inline std::vector<std::string> check_delta(const Tuple& t) {
    return reasons_of([&] {
        const double L = param(t, "L");
        if (!(L >= 1.0 && L <= 1e4)) throw OutOfRange("L must lie in [1, 1e4]");
        if (std::abs(double(iparam(t, "n"))) > 2.0 * L) throw OutOfRange("|n| must be <= 2L");
    });
}

inline std::vector<Task> plan_delta(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    std::map<double, std::vector<long>> byL;
    for (const auto& t : tuples) byL[param(t, "L")].push_back(static_cast<long>(iparam(t, "n")));
    std::vector<Task> tasks;
    for (const auto& [L, ns] : byL) {
        Task t{"delta", "indicator", {{"L", L}, {"n", double(ns.front())}}, {}};
        const double tol = cx.tolerance;
        const double LL = L;
        const auto nn = ns;
        t.run = [LL, nn, tol] {
            const DeltaExpansion D(LL);
            std::vector<VerificationReport> out;
            for (long n : nn)
                out.push_back(make_report("delta", "indicator", {{"L", LL}, {"n", double(n)}}, dfi_delta(n, D), n == 0 ? 1.0 : 0.0, Metric::Abs, tol));
            return out;
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

inline std::vector<std::string> check_g_properties(const Tuple& t) {
    return reasons_of([&] {
        const double L = param(t, "L");
        if (!(L >= 1.0 && L <= 1e4)) throw OutOfRange("L must lie in [1, 1e4]");
    });
}

inline std::vector<Task> plan_g_properties(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    std::vector<Task> tasks;
    for (const auto& tp : tuples) {
        Task t{"g-properties", "near-one", tp, {}};
        const double tol = cx.tolerance, ceil = cx.ratio_ceiling;
        t.run = [tp, tol, ceil] {
            const DeltaExpansion D(param(tp, "L"));
            std::vector<int> qs;
            for (int q = 1; q <= D.qmax(); ++q) qs.push_back(q);
            const GPropertyReport g = g_properties_check(D, qs);
            const std::string note = "g(1,0)=" + fmt(g.g_at_origin_q1);
            return std::vector<VerificationReport>{
                make_report("g-properties", "near-one", tp, g.near_one_ratio, 1.0, Metric::Ratio, ceil, note),
                make_report("g-properties", "derivative-1", tp, g.derivative_ratio[0], 1.0, Metric::Ratio, ceil),
                make_report("g-properties", "derivative-2", tp, g.derivative_ratio[1], 1.0, Metric::Ratio, ceil),
                make_report("g-properties", "decay", tp, g.decay_ratio, 1.0, Metric::Ratio, ceil),
                make_report("g-properties", "l1", tp, g.l1_ratio, 1.0, Metric::Ratio, ceil),
                make_report("g-properties", "tail", tp, g.tail_mass, 0.0, Metric::Abs, tol)};
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

// ---- GL(2) Voronoi -------------------------------------------------------

inline std::vector<std::string> check_voronoi(const Tuple& t) {
    return reasons_of([&] {
        const i64 q = iparam(t, "q"), a = iparam(t, "a"), fn = iparam(t, "fn");
        if (q < 1) throw DomainError("q must be positive");
        if (q > 1 && std::gcd(reduce(a, static_cast<u64>(q)), static_cast<u64>(q)) != 1) throw NotCoprime("gcd(a, q) != 1");
        if (fn < 0 || fn >= kVoronoiFunctions) throw InvalidGrid("fn must lie in 0.." + std::to_string(kVoronoiFunctions - 1));
    });
}

inline std::string voronoi_note(const VoronoiReport& r) {
    return "dual_terms=" + std::to_string(r.dual_terms) + " truncation=" + fmt(r.truncation_threshold) + " quadrature=" + fmt(r.quadrature_error);
}

inline std::vector<Task> plan_voronoi(const std::vector<Tuple>& tuples, const VerifierContext& cx, bool divisor) {
    std::vector<Task> tasks;
    const std::string name = divisor ? "voronoi-divisor" : "voronoi-gl2";
    for (const auto& tp : tuples) {
        Task t{name, "identity", tp, {}};
        const double tol = cx.tolerance;
        t.run = [tp, tol, divisor, name] {
            const i64 a = iparam(tp, "a");
            const u64 q = static_cast<u64>(iparam(tp, "q"));
            const TestFunction g = voronoi_test_function(static_cast<int>(iparam(tp, "fn")));
            if (!divisor) {
                const VoronoiReport r = gl2_voronoi_check(a, q, g);
                return std::vector<VerificationReport>{make_report(name, "identity", tp, r.lhs, r.rhs, Metric::Rel, tol, voronoi_note(r))};
            }
            const VoronoiReport r = divisor_voronoi_check(a, q, g);
            const double without = std::abs(r.lhs - (r.rhs - r.main_term));
            return std::vector<VerificationReport>{
                make_report(name, "identity", tp, r.lhs, r.rhs, Metric::Rel, tol, voronoi_note(r)),
                make_report(name, "main-term-guard", tp, r.abs_error, without, Metric::Ratio, 1.0 / kMainTermGuard,
                            "main_term=" + fmt(r.main_term.real()))};
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

// ---- GL(3) / d3 ----------------------------------------------------------

inline std::vector<std::string> check_gl3(const Tuple& t) {
    return reasons_of([&] {
        const i64 fn = iparam(t, "fn"), s = iparam(t, "sign");
        if (fn < 0 || fn >= static_cast<i64>(gl3_basket().size())) throw InvalidGrid("fn must lie in 0.." + std::to_string(gl3_basket().size() - 1));
        if (s != 1 && s != -1) throw DomainError("sign must be +1 or -1");
    });
}

inline std::vector<Task> plan_gl3(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    std::vector<Task> tasks;
    for (const auto& tp : tuples) {
        Task t{"gl3-decay", "contour", tp, {}};
        const double tol = cx.tolerance;
        t.run = [tp, tol] {
            const TestFunction g = gl3_basket().at(static_cast<std::size_t>(iparam(tp, "fn")));
            const int sign = static_cast<int>(iparam(tp, "sign"));
            std::vector<VerificationReport> out;
            const GL3DecayReport d = gl3_decay_check(g, sign);
            for (double f : {0.01, 0.1, 1.0}) {
                const double y = f * d.threshold;
                const ContourReport c = gl3_contour_check(y, g, sign);
                ParamList ps = tp;
                ps.emplace_back("y", y);
                out.push_back(make_report("gl3-decay", "contour", ps, c.rel_diff, 0.0, Metric::Value, tol, "max_abs_diff=" + fmt(c.max_abs_diff)));
            }
            ParamList ps = tp;
            ps.emplace_back("y", d.threshold);
            out.push_back(make_report("gl3-decay", "decay-slope", ps, d.slope, 0.0, Metric::Value, -6.0,
                                      "threshold=" + fmt(d.threshold) + " ratio=" + fmt(d.ratio)));
            return out;
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

inline std::vector<std::string> check_d3(const Tuple& t) {
    return reasons_of([&] {
        const i64 c = iparam(t, "c"), a = iparam(t, "a");
        if (c < 1 || c > 6) throw OutOfRange("c must lie in 1..6");
        if (c > 1 && std::gcd(reduce(a, static_cast<u64>(c)), static_cast<u64>(c)) != 1) throw NotCoprime("gcd(a, c) != 1");
    });
}

inline std::vector<Task> plan_d3(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    std::vector<Task> tasks;
    for (const auto& tp : tuples) {
        Task t{"d3-voronoi", "fit", tp, {}};
        const double tol = cx.tolerance;
        t.run = [tp, tol] {
            const D3ResidualReport r = d3_voronoi_residual_check(iparam(tp, "a"), static_cast<u64>(iparam(tp, "c")), gl3_basket());
            const std::string note = std::string("convention=") + convention_name(r.convention) + " coeff=" + fmt(r.coeff[0]) + "," +
                                     fmt(r.coeff[1]) + "," + fmt(r.coeff[2]);
            return std::vector<VerificationReport>{
                make_report("d3-voronoi", "fit", tp, r.fit_residual, 0.0, Metric::Value, tol, note),
                make_report("d3-voronoi", "g2-coefficient", tp, r.coeff[2], r.predicted_g2, Metric::Rel, tol, "ratio=" + fmt(r.g2_ratio)),
                make_report("d3-voronoi", "g1-coefficient", tp, r.coeff[1], r.predicted_g1, Metric::Rel, tol, "ratio=" + fmt(r.g1_ratio))};
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

inline std::vector<std::string> check_second_moment(const Tuple& t) {
    return reasons_of([&] {
        const double x = param(t, "x");
        if (!(x >= 2.0 && x <= 1e6)) throw OutOfRange("x must lie in [2, 1e6]");
    });
}

inline std::vector<Task> plan_second_moment(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    if (tuples.empty()) return {};
    const auto xs = unique_values(tuples, "x");
    Task t{"second-moment", "bounded", {{"x", xs.front()}}, {}};
    const double ceil = cx.ratio_ceiling;
    t.run = [xs, ceil] {
        const SecondMomentReport rep = second_moment_check(xs);
        std::vector<VerificationReport> out;
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            const auto& row = rep.rows[i];
            out.push_back(make_report("second-moment", "bounded", {{"x", row.x}}, row.ratio, 0.0, Metric::Value, ceil, "sum=" + fmt(row.sum)));
            if (i > 0 && rep.rows[i - 1].x >= 1e4)
                out.push_back(make_report("second-moment", "non-increasing", {{"x", row.x}}, row.ratio, rep.rows[i - 1].ratio, Metric::Ratio, 1.1));
        }
        return out;
    };
    return {t};
}

// ---- stationary phase ----------------------------------------------------

inline std::vector<std::string> check_stationary(const Tuple& t) {
    return reasons_of([&] {
        if (!(param(t, "Y") > 0.0)) throw DomainError("Y must be positive");
        if (!(param(t, "B") > 0.0)) throw DomainError("B must be positive");
    });
}

inline std::vector<Task> plan_stationary(const std::vector<Tuple>& tuples, const VerifierContext& cx) {
    if (tuples.empty()) return {};
    const auto Ys = unique_values(tuples, "Y"), Bs = unique_values(tuples, "B");
    const TestFunction g = TestFunction::bump(1.0, 2.0);
    std::vector<Task> tasks;
    Task lead{"stationary-phase", "leading", {{"Y", Ys.front()}}, {}};
    const double tol = cx.tolerance;
    lead.run = [Ys, g, tol] {
        std::vector<VerificationReport> out;
        std::vector<double> errs;
        for (double Y : Ys) {
            const StationaryPhaseResult r = stationary_phase_compare(quadratic_phase_integral(g, Y, 1.5));
            errs.push_back(r.rel_error);
            out.push_back(make_report("stationary-phase", "leading", {{"Y", Y}}, r.leading, r.direct, Metric::Rel, tol));
        }
        if (Ys.size() >= 2) {
            const double slope = loglog_slope(Ys, errs);
            out.push_back(make_report("stationary-phase", "order", {{"Y", Ys.front()}}, slope, -1.0, Metric::Abs, 0.4,
                                      "Y=" + fmt(Ys.front()) + ".." + fmt(Ys.back())));
        }
        return out;
    };
    tasks.push_back(std::move(lead));
    Task dec{"stationary-phase", "decay", {{"B", Bs.front()}}, {}};
    dec.run = [Bs, g] {
        const DecayReport d = nonstationary_decay_check(g, Bs);
        std::vector<VerificationReport> out;
        for (const auto& row : d.rows)
            out.push_back(make_report("stationary-phase", "first-derivative", {{"B", row.B}}, row.magnitude, row.magnitude / row.first_derivative_ratio,
                                      Metric::Ratio, 1.0));
        if (Bs.size() >= 2)
            out.push_back(make_report("stationary-phase", "decay", {{"B", Bs.front()}}, d.slope, 0.0, Metric::Value, -1.9,
                                      "B=" + fmt(Bs.front()) + ".." + fmt(Bs.back())));
        return out;
    };
    tasks.push_back(std::move(dec));
    return tasks;
}

// ---- exponent ------------------------------------------------------------

inline std::string rational_string(const Rational& x) { return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator()); }

inline std::vector<std::string> check_exponent(const Tuple& t) {
    return reasons_of([&] {
        const i64 c = iparam(t, "case");
        if (c < 0 || c > 2) throw InvalidGrid("case must lie in 0..2");
    });
}

inline std::vector<Task> plan_exponent(const std::vector<Tuple>& tuples, const VerifierContext&) {
    std::vector<Task> tasks;
    for (const auto& tp : tuples) {
        Task t{"exponent", "solution", tp, {}};
        t.run = [tp] {
            const i64 c = iparam(tp, "case");
            std::vector<VerificationReport> out;
            auto exact = [&](const std::string& check, const Rational& got, const Rational& want) {
                out.push_back(make_report("exponent", check, tp, boost::rational_cast<double>(got), boost::rational_cast<double>(want), Metric::Abs, 0.0,
                                          rational_string(got)));
            };
            if (c == 0) {
                const auto s = exponent_optimizer({Rational(3, 4), Rational(3, 4)}, {Rational(7, 4), Rational(-1, 2)});
                exact("l-over-r", s.l_over_r, Rational(4, 5));
                exact("sum-exponent", s.sum_exponent, Rational(27, 20));
                exact("l-exponent", s.l_exponent, Rational(3, 2) - Rational(3, 20));
            } else if (c == 1) {
                const auto s = exponent_optimizer({Rational(1), Rational(1)}, {Rational(1), Rational(-1)});
                exact("l-over-r", s.l_over_r, Rational(0));
            } else {
                bool threw = false;
                try {
                    exponent_optimizer({Rational(1), Rational(1, 2)}, {Rational(1), Rational(1, 2)});
                } catch (const NoCrossing&) {
                    threw = true;
                }
                out.push_back(make_report("exponent", "no-crossing", tp, threw ? 1.0 : 0.0, 1.0, Metric::Abs, 0.0));
            }
            return out;
        };
        tasks.push_back(std::move(t));
    }
    return tasks;
}

} // namespace detail

inline const std::vector<Verifier>& verifiers() {
    using namespace detail;
    static const std::vector<Verifier> v = {
        {"charsum", "brute-force character sum against its closed form; vanishing branches against 0",
         "p=3,5;r=4;l=2;l1=0;q=1,2,4;k=1;n1=1;n2=1..5;m=1..5;sign=-1,1;chi=-1"
         "|p=3;r=4;l=2;l1=0;q=1,2;k=1;n1=3;n2=1,2;m=1..3;sign=1;chi=1"
         "|p=3;r=4;l=2;l1=0;q=27,54;k=1;n1=1;n2=1,2;m=1..3;sign=1;chi=1",
         1e-6, 16.0, check_charsum, plan_charsum},
        {"cbeta", "beta-sum directly against the h2-constrained v-sum", "p=3,5;r=2,4;l=1;l1=0;q=1,2;m=1..3;u=1,2;chi=1,2", 1e-6, 16.0,
         check_cbeta, plan_cbeta},
        {"post-poisson", "post-Poisson sum over nu against the congruence form",
         "p=3;r=4;l=2;l1=0;chi=1;sign=1;q1=1;q2a=1,2;q2b=1,2;m=1,2;mp=1,2;n2=0..2"
         "|p=5;r=4;l=2;l1=0;chi=1;sign=1;q1=1;q2a=1,2;q2b=1,2;m=1;mp=1,2;n2=0,1",
         1e-5, 16.0, check_post_poisson, plan_post_poisson},
        {"bound-zero", "n2 = 0 post-Poisson sum: forced zeros and the bound ratio",
         "p=3;r=4;l=2;l1=0;chi=1;sign=1;q1=1;q2a=1,2;q2b=1,2;m=1;mp=1,2,4,10,19"
         "|p=5;r=4;l=2;l1=0;chi=1;sign=1;q1=1;q2a=1,2;q2b=1,2;m=1;mp=1,2,6,26"
         "|p=3;r=6;l=4;l1=0;chi=1;sign=1;q1=1;q2a=1,2;q2b=1,2;m=1;mp=1,2,4,10",
         1e-6, 4.0, check_bound_zero, plan_bound_zero},
        {"counting", "exhaustive solution counts of the n2 != 0 congruence system",
         "p=3;r=4;l=2;l1=0;chi=1,2;sign=1;q1=1;q2a=1,2;q2b=1,2;m=1,2;mp=1,2;n2=1,2"
         "|p=5;r=4;l=2;l1=0;chi=1;sign=1;q1=1;q2a=1,2;q2b=1,2;m=1,2;mp=1,3;n2=1,2"
         "|p=3;r=6;l=4;l1=0;chi=1;sign=1;q1=1;q2a=1,2;q2b=1;m=1;mp=1,2;n2=1",
         0.0, 12.0, check_counting, plan_counting},
        {"delta", "delta-symbol expansion against the indicator of n = 0", "L=50;n=-100..100", 1e-3, 16.0, check_delta, plan_delta},
        {"g-properties", "measured constants of the g(q, x) bounds", "L=50", 1e-9, 16.0, check_g_properties, plan_g_properties},
        {"voronoi-gl2", "Voronoi summation for Delta", "q=1,3,5;a=1;fn=0..2", 1e-4, 16.0, check_voronoi,
         [](const std::vector<Tuple>& t, const VerifierContext& c) { return plan_voronoi(t, c, false); }},
        {"voronoi-divisor", "Voronoi summation for the divisor function", "q=1,3,5;a=1;fn=0..2", 1e-4, 16.0, check_voronoi,
         [](const std::vector<Tuple>& t, const VerifierContext& c) { return plan_voronoi(t, c, true); }},
        {"gl3-decay", "GL(3) transform: contour independence and decay past the threshold", "fn=0..4;sign=-1,1", 1e-8, 16.0, check_gl3, plan_gl3},
        {"d3-voronoi", "twisted d3 Voronoi residual fit and its main-term coefficients", "c=1..3;a=1", 1e-4, 16.0, check_d3, plan_d3},
        {"stationary-phase", "stationary-phase leading term, its convergence order, and nonstationary decay",
         "Y=100..1600:*2;B=10..320:*2", 0.05, 16.0, check_stationary, plan_stationary},
        {"second-moment", "second moment of the d3 coefficients against x log^4 x", "x=1000..512000:*2", 0.0, 16.0, check_second_moment,
         plan_second_moment},
        {"exponent", "exponent equalization in exact rationals", "case=0..2", 0.0, 16.0, check_exponent, plan_exponent},
    };
    return v;
}

inline const Verifier& find_verifier(const std::string& name) {
    for (const auto& v : verifiers())
        if (v.name == name) return v;
    throw UnknownVerifier("'" + name + "'");
}

// Resolved tuples of a run; throws InvalidGrid listing every rejected tuple.
inline std::vector<Tuple> resolve_tuples(const Verifier& v, const RunConfig& cfg) {
    const Grid g = resolve_grid(parse_grid(v.default_grid), cfg.grid_given ? cfg.grid : Grid{});
    const auto tuples = expand_grid(g);
    std::string bad;
    std::size_t nbad = 0;
    for (const auto& t : tuples)
        for (const auto& why : v.check(t)) {
            ++nbad;
            bad += "\n  " + describe(t) + ": " + why;
        }
    if (nbad) throw InvalidGrid(std::to_string(nbad) + " rejected tuple(s):" + bad);
    return tuples;
}

inline std::vector<VerificationReport> run_verifier(const RunConfig& cfg) {
    const Verifier& v = find_verifier(cfg.verifier);
    const auto tuples = resolve_tuples(v, cfg);
    VerifierContext cx;
    cx.tolerance = cfg.tolerance.value_or(v.tolerance);
    cx.ratio_ceiling = cfg.ratio_ceiling.value_or(v.ratio_ceiling);
    cx.seed = cfg.seed;
    return run_tasks(v.plan(tuples, cx), cfg.worker_count());
}

} // namespace depthkit
