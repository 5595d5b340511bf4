#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "depthkit/harness/report.hpp"

namespace depthkit {

// A unit of work producing reports; on an exception one failing report with
// the given verifier, check and params is produced instead.
struct Task {
    std::string verifier;
    std::string check;
    ParamList params;
    std::function<std::vector<VerificationReport>()> run;
};

inline VerificationReport error_report(const Task& t, const std::string& what) {
    return make_report(t.verifier, t.check, t.params, NAN, NAN, Metric::Abs, 0.0, what);
}

// canonical order: verifier, then parameter values in their listed order, then check
inline bool canonical_less(const VerificationReport& a, const VerificationReport& b) {
    if (a.verifier != b.verifier) return a.verifier < b.verifier;
    const std::size_t n = std::min(a.params.size(), b.params.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.params[i].first != b.params[i].first) return a.params[i].first < b.params[i].first;
        if (a.params[i].second != b.params[i].second) return a.params[i].second < b.params[i].second;
    }
    if (a.params.size() != b.params.size()) return a.params.size() < b.params.size();
    return a.check < b.check;
}

inline void canonical_sort(std::vector<VerificationReport>& reports) { std::stable_sort(reports.begin(), reports.end(), canonical_less); }

// Runs tasks on a bounded pool; output is canonically sorted, independent of jobs.
inline std::vector<VerificationReport> run_tasks(const std::vector<Task>& tasks, int jobs) {
    std::vector<std::vector<VerificationReport>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                results[i] = tasks[i].run();
            } catch (const std::exception& e) {
                results[i] = {error_report(tasks[i], e.what())};
            }
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            for (auto& r : results[i]) r.wall_time = dt / static_cast<double>(results[i].size());
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<VerificationReport> out;
    for (auto& v : results)
        for (auto& r : v) out.push_back(std::move(r));
    canonical_sort(out);
    return out;
}

inline bool all_pass(const std::vector<VerificationReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.pass; });
}

} // namespace depthkit
