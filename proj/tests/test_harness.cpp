#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "depthkit/harness.hpp"

using namespace depthkit;

namespace {

RunConfig config(const std::string& verifier, const std::string& grid = "", int jobs = 1) {
    RunConfig cfg;
    cfg.verifier = verifier;
    if (!grid.empty()) {
        cfg.grid = parse_grid(grid);
        cfg.grid_given = true;
    }
    cfg.jobs = jobs;
    return cfg;
}

std::vector<VerificationReport> sample_reports() {
    return {make_report("cbeta", "oracle", {{"p", 3}, {"q", 2}}, cplx(1.0 / 3.0, -2e-300), cplx(0.1, 0.7), Metric::Abs, 1e-6, "x,y \"z\""),
            make_report("cbeta", "oracle", {{"p", 5}}, cplx(NAN, 0), cplx(INFINITY, -INFINITY), Metric::Rel, 1e-6, ""),
            make_report("exponent", "value", {}, cplx(-3.0), cplx(0.0), Metric::Value, -1.0, "ok")};
}

} // namespace

TEST(Report, PassFollowsMetric) {
    EXPECT_TRUE(make_report("v", "c", {}, 1.0, 1.0 + 1e-9, Metric::Abs, 1e-8, "").pass);
    EXPECT_FALSE(make_report("v", "c", {}, 1.0, 2.0, Metric::Abs, 0.5, "").pass);
    EXPECT_TRUE(make_report("v", "c", {}, 2.0, 4.0, Metric::Ratio, 0.5, "").pass);
    EXPECT_FALSE(make_report("v", "c", {}, 1.0, 0.0, Metric::Rel, 1.0, "").pass);
    EXPECT_FALSE(make_report("v", "c", {}, NAN, 0.0, Metric::Abs, 1.0, "").pass);
    EXPECT_TRUE(make_report("v", "c", {}, -7.0, 0.0, Metric::Value, -6.0, "").pass);
}

TEST(Report, FormatDouble) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(NAN), "nan");
    EXPECT_EQ(format_double(INFINITY), "inf");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    for (double x : {1.0 / 3.0, 1e-300, 6.02214076e23, -2.5e-7}) EXPECT_EQ(parse_double(format_double(x)), x);
}

TEST(Report, JsonRoundTrip) {
    const auto reps = sample_reports();
    const std::string text = emit_reports(reps, Format::JsonLines);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    const auto back = parse_reports(text);
    ASSERT_EQ(back.size(), reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) {
        EXPECT_TRUE(back[i] == reps[i]) << i;
        EXPECT_TRUE(consistent(back[i]));
    }
    EXPECT_EQ(emit_reports(back, Format::JsonLines), text);
    EXPECT_EQ(text.substr(0, 40), "{\"verifier\":\"cbeta\",\"check\":\"oracle\",\"pa");
}

TEST(Report, CsvRoundTripAndHeader) {
    const auto reps = sample_reports();
    const std::string text = emit_reports(reps, Format::Csv);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "verifier,check,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_error,rel_error,ratio,metric,threshold,pass,note");
    EXPECT_EQ(std::string(kCsvHeader), text.substr(0, text.find('\n')));
    const auto back = parse_reports(text);
    ASSERT_EQ(back.size(), reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) EXPECT_TRUE(back[i] == reps[i]) << i;
    EXPECT_EQ(emit_reports(back, Format::Csv), text);
    EXPECT_EQ(emit_reports(back, Format::JsonLines), emit_reports(reps, Format::JsonLines));
}

TEST(Report, TamperedPassIsInconsistent) {
    auto r = sample_reports()[0];
    EXPECT_TRUE(consistent(r));
    r.pass = !r.pass;
    EXPECT_FALSE(consistent(r));
}

TEST(Report, FileIo) {
    const std::string path = ::testing::TempDir() + "depthkit_reports.csv";
    emit_report(sample_reports(), Format::Csv, path);
    const auto back = read_reports(path);
    EXPECT_EQ(back.size(), 3u);
    std::remove(path.c_str());
    EXPECT_THROW(read_reports("/nonexistent/dir/x.jsonl"), IoError);
    EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(Grid, AxisSyntax) {
    EXPECT_EQ(parse_axis_values("3,5"), (std::vector<double>{3, 5}));
    EXPECT_EQ(parse_axis_values("1..4"), (std::vector<double>{1, 2, 3, 4}));
    EXPECT_EQ(parse_axis_values("0..10:5"), (std::vector<double>{0, 5, 10}));
    EXPECT_EQ(parse_axis_values("10..80:*2"), (std::vector<double>{10, 20, 40, 80}));
    EXPECT_EQ(parse_axis_values("-1,1"), (std::vector<double>{-1, 1}));
    EXPECT_THROW(parse_axis_values("1..x"), ConfigError);
    EXPECT_THROW(parse_axis_values("5..1:*0.5"), ConfigError);
}

TEST(Grid, BlocksAndExpansion) {
    const Grid g = parse_grid("p=3,5;q=1..2 | p=7;q=9");
    ASSERT_EQ(g.blocks.size(), 2u);
    const auto tuples = expand_grid(g);
    ASSERT_EQ(tuples.size(), 5u);
    EXPECT_EQ(describe(tuples.front()), "p=3 q=1");
    EXPECT_EQ(param(tuples.back(), "p"), 7.0);
    EXPECT_THROW(param(tuples.back(), "r"), InvalidGrid);
    EXPECT_TRUE(expand_grid(parse_grid("p=")).empty());
}

TEST(Grid, ResolveAgainstDefaults) {
    const Grid defaults = parse_grid("p=3;q=1,2 | p=5;q=4");
    const auto one = expand_grid(resolve_grid(defaults, parse_grid("q=7")));
    ASSERT_EQ(one.size(), 2u);
    EXPECT_EQ(param(one[0], "q"), 7.0);
    EXPECT_EQ(param(one[1], "p"), 5.0);
    const auto two = expand_grid(resolve_grid(defaults, parse_grid("q=7 | p=11")));
    ASSERT_EQ(two.size(), 3u);
    EXPECT_THROW(resolve_grid(defaults, parse_grid("z=1")), InvalidGrid);
}

TEST(Config, Yaml) {
    RunConfig cfg;
    load_config_string("verifier: cbeta\ngrid:\n  p: [3]\n  r: 2\n  m: \"1..2\"\ntolerance: 1e-7\nratio-ceiling: 8\njobs: 2\nseed: 9\nformat: csv\n", cfg);
    EXPECT_EQ(cfg.verifier, "cbeta");
    EXPECT_TRUE(cfg.grid_given);
    EXPECT_EQ(*cfg.tolerance, 1e-7);
    EXPECT_EQ(*cfg.ratio_ceiling, 8.0);
    EXPECT_EQ(cfg.jobs, 2);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.format, Format::Csv);
    EXPECT_EQ(expand_grid(cfg.grid).size(), 2u);
    RunConfig bad;
    EXPECT_THROW(load_config_string("verifier: cbeta\nbogus: 1\n", bad), ConfigError);
    EXPECT_THROW(load_config_string("verifier: [unclosed\n", bad), ConfigError);
    EXPECT_THROW(load_config_file("/nonexistent.yaml", bad), ConfigError);
}

TEST(Runner, UnknownVerifierAndInvalidGrid) {
    EXPECT_THROW(find_verifier("no-such-verifier"), UnknownVerifier);
    EXPECT_THROW(run_verifier(config("nope")), UnknownVerifier);
    try {
        run_verifier(config("charsum", "p=4,9;r=4"));
        FAIL() << "expected InvalidGrid";
    } catch (const InvalidGrid& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("p=4"), std::string::npos);
        EXPECT_NE(what.find("p=9"), std::string::npos);
    }
    EXPECT_THROW(run_verifier(config("charsum", "zz=1")), InvalidGrid);
}

TEST(Runner, EmptyGridGivesEmptyStream) {
    const auto reps = run_verifier(config("charsum", "p="));
    EXPECT_TRUE(reps.empty());
    EXPECT_EQ(emit_reports(reps, Format::JsonLines), "");
    EXPECT_EQ(emit_reports(reps, Format::Csv), std::string(kCsvHeader) + "\n");
}

TEST(Runner, DeterministicAcrossJobs) {
    for (const char* v : {"cbeta", "exponent", "counting"}) {
        const std::string grid = std::string(v) == "cbeta" ? "p=3;r=2;m=1..3" : "";
        RunConfig a = config(v, grid, 1), b = config(v, grid, 4);
        const std::string ta = emit_reports(run_verifier(a), Format::JsonLines);
        const std::string tb = emit_reports(run_verifier(b), Format::JsonLines);
        EXPECT_FALSE(ta.empty());
        EXPECT_EQ(ta, tb) << v;
        EXPECT_EQ(emit_reports(run_verifier(a), Format::Csv), emit_reports(run_verifier(b), Format::Csv));
    }
}

TEST(Runner, ThrowingTaskBecomesFailingReport) {
    std::vector<Task> tasks;
    tasks.push_back({"v", "c", {{"x", 2}}, [] { return std::vector<VerificationReport>{make_report("v", "c", {{"x", 2}}, 0.0, 0.0, Metric::Abs, 1.0, "")}; }});
    tasks.push_back({"v", "c", {{"x", 1}}, []() -> std::vector<VerificationReport> { throw DomainError("boom"); }});
    const auto out = run_tasks(tasks, 2);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].params[0].second, 1.0);
    EXPECT_FALSE(out[0].pass);
    EXPECT_NE(out[0].note.find("boom"), std::string::npos);
    EXPECT_TRUE(out[1].pass);
    EXPECT_FALSE(all_pass(out));
}

TEST(Runner, ToleranceOverride) {
    RunConfig cfg = config("cbeta", "p=3;r=2;m=1;u=1;chi=1;q=1");
    cfg.tolerance = 1e-30;
    const auto reps = run_verifier(cfg);
    ASSERT_FALSE(reps.empty());
    for (const auto& r : reps) EXPECT_EQ(r.threshold, 1e-30 * 3.0);
}

TEST(Runner, EveryVerifierIsRegistered) {
    const std::vector<std::string> names{"charsum", "cbeta", "post-poisson", "bound-zero", "counting", "delta", "g-properties", "voronoi-gl2",
                                         "voronoi-divisor", "gl3-decay", "d3-voronoi", "stationary-phase", "second-moment", "exponent"};
    for (const auto& n : names) EXPECT_NO_THROW(find_verifier(n)) << n;
    EXPECT_EQ(verifiers().size(), names.size());
    for (const auto& v : verifiers()) EXPECT_NO_THROW(resolve_tuples(v, config(v.name))) << v.name;
}

TEST(Summary, CountsAndSvg) {
    const auto reps = sample_reports();
    const auto s = summarize(reps);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].total, 2u);
    EXPECT_NE(summary_text(reps).find("cbeta oracle"), std::string::npos);
    const std::string svg = svg_plot(reps);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Bench, EmptyLadderAndSmallRun) {
    EXPECT_TRUE(bench_kernels({}).rows.empty());
    BenchOptions opt;
    opt.min_seconds = 0.01;
    const auto rep = bench_kernels({1000}, opt);
    EXPECT_EQ(rep.rows.size(), 3u + 4u);
    EXPECT_GT(rep.charsum_rate, 0.0);
    const std::string csv = emit_bench(rep, Format::Csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kBenchCsvHeader);
}
