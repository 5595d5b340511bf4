#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "depthkit/harness.hpp"

using namespace depthkit;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
    } else {
        write_text_file(path, text);
    }
}

struct VerifyFlags {
    std::string name, config, grid, out, format;
    std::optional<int> jobs;
    std::optional<double> tolerance, ceiling;
    std::optional<u64> seed;
    bool quiet = false;
};

int run_verify(const VerifyFlags& f) {
    RunConfig cfg;
    try {
        if (!f.config.empty()) load_config_file(f.config, cfg);
        if (!f.name.empty()) cfg.verifier = f.name;
        if (!f.grid.empty()) {
            cfg.grid = parse_grid(f.grid);
            cfg.grid_given = true;
        }
        if (!f.out.empty()) cfg.out = f.out;
        if (!f.format.empty()) cfg.format = parse_format(f.format);
        if (f.jobs) cfg.jobs = *f.jobs;
        if (f.tolerance) cfg.tolerance = *f.tolerance;
        if (f.ceiling) cfg.ratio_ceiling = *f.ceiling;
        if (f.seed) cfg.seed = *f.seed;
        if (cfg.verifier.empty()) throw ConfigError("no verifier named (argument or config key 'verifier')");
        if (cfg.jobs < 0) throw ConfigError("jobs must be >= 0");
        find_verifier(cfg.verifier);
        resolve_tuples(find_verifier(cfg.verifier), cfg);
    } catch (const Error& e) {
        std::cerr << "depthkit: " << e.what() << "\n";
        return kExitConfig;
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<VerificationReport> reports;
    try {
        reports = run_verifier(cfg);
    } catch (const InvalidGrid& e) {
        std::cerr << "depthkit: " << e.what() << "\n";
        return kExitConfig;
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        write_output(emit_reports(reports, cfg.format), cfg.out);
    } catch (const IoError& e) {
        std::cerr << "depthkit: " << e.what() << "\n";
        return kExitConfig;
    }
    std::size_t failed = 0;
    for (const auto& r : reports) failed += r.pass ? 0 : 1;
    if (!f.quiet) {
        std::cerr << summary_text(reports);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: %zu reports, %zu failed, %.2f s\n", cfg.verifier.c_str(), reports.size(), failed, dt);
        std::cerr << buf;
    }
    return failed ? kExitFail : kExitPass;
}

struct BenchFlags {
    std::string ladder = "1000,10000,100000", out, format = "csv";
    double min_seconds = 0.2, inverse_ratio = 2.0, min_charsum_rate = 1e6;
};

int run_bench(const BenchFlags& f) {
    std::vector<u64> ladder;
    Format fmt;
    try {
        for (double x : parse_axis_values(f.ladder)) {
            if (!(x >= 1.0 && x <= 1e7) || x != std::floor(x)) throw ConfigError("ladder entries must be integers in [1, 1e7]");
            ladder.push_back(static_cast<u64>(x));
        }
        fmt = parse_format(f.format);
    } catch (const Error& e) {
        std::cerr << "depthkit: " << e.what() << "\n";
        return kExitConfig;
    }
    BenchOptions opt;
    opt.min_seconds = f.min_seconds;
    opt.required_inverse_ratio = f.inverse_ratio;
    const BenchReport rep = bench_kernels(ladder, opt);
    try {
        write_output(emit_bench(rep, fmt), f.out);
    } catch (const IoError& e) {
        std::cerr << "depthkit: " << e.what() << "\n";
        return kExitConfig;
    }
    if (ladder.empty()) return kExitPass;
    char buf[200];
    std::snprintf(buf, sizeof buf, "batched/naive inverse (q >= 1e4): %.3g, charsum Kloosterman terms/s: %.3g\n", rep.min_inverse_ratio,
                  rep.charsum_rate);
    std::cerr << buf;
    return rep.inverse_ok && rep.charsum_rate >= f.min_charsum_rate ? kExitPass : kExitFail;
}

struct ReportFlags {
    std::string input, out, format, svg;
};

int run_report(const ReportFlags& f) {
    std::vector<VerificationReport> reports;
    try {
        reports = read_reports(f.input);
        if (!f.out.empty()) write_output(emit_reports(reports, f.format.empty() ? Format::JsonLines : parse_format(f.format)), f.out);
        if (!f.svg.empty()) write_text_file(f.svg, svg_plot(reports));
    } catch (const Error& e) {
        std::cerr << "depthkit: " << e.what() << "\n";
        return kExitConfig;
    }
    std::cout << summary_text(reports);
    for (const auto& r : reports) {
        if (!consistent(r)) {
            std::cerr << "depthkit: report inconsistent with its lhs/rhs: " << r.verifier << " " << r.check << "\n";
            return kExitConfig;
        }
    }
    return all_pass(reports) ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"depthkit: numerical verification harness"};
    app.require_subcommand(1);

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "run a verifier over its grid");
    verify->add_option("name", vf.name, "verifier name");
    verify->add_option("--config", vf.config, "YAML config file");
    verify->add_option("--grid", vf.grid, "inline grid, e.g. 'p=3,5;q=1..4'");
    verify->add_option("--out", vf.out, "report file (default stdout)");
    verify->add_option("--format", vf.format, "json or csv");
    verify->add_option("--jobs", vf.jobs, "worker threads (0: all cores)");
    verify->add_option("--tolerance", vf.tolerance, "primary tolerance");
    verify->add_option("--ratio-ceiling", vf.ceiling, "ceiling for measured constants");
    verify->add_option("--seed", vf.seed, "seed for sampled checks");
    verify->add_flag("--quiet", vf.quiet, "no summary on stderr");

    BenchFlags bf;
    auto* bench = app.add_subcommand("bench", "throughput of the sum kernels");
    bench->add_option("--ladder", bf.ladder, "moduli, e.g. '1000,10000,100000'");
    bench->add_option("--out", bf.out, "output file (default stdout)");
    bench->add_option("--format", bf.format, "json or csv");
    bench->add_option("--min-seconds", bf.min_seconds, "time per measurement");
    bench->add_option("--inverse-ratio", bf.inverse_ratio, "required batched/naive inverse ratio at q >= 1e4");
    bench->add_option("--min-charsum-rate", bf.min_charsum_rate, "required Kloosterman terms per second in charsum");

    ReportFlags rf;
    auto* report = app.add_subcommand("report", "summarize, convert or plot a report file");
    report->add_option("input", rf.input, "report file (json-lines or csv)")->required();
    report->add_option("--out", rf.out, "write the reports in --format");
    report->add_option("--format", rf.format, "json or csv");
    report->add_option("--svg", rf.svg, "write an SVG plot");

    auto* list = app.add_subcommand("list", "list verifiers and their default grids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    try {
        if (*verify) return run_verify(vf);
        if (*bench) return run_bench(bf);
        if (*report) return run_report(rf);
        if (*list) {
            for (const auto& v : verifiers()) std::cout << v.name << "  " << v.summary << "\n    " << v.default_grid << "\n";
            return kExitPass;
        }
    } catch (const std::exception& e) {
        std::cerr << "depthkit: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
