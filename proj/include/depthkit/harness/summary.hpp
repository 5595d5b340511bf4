#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "depthkit/harness/report.hpp"

namespace depthkit {

struct CheckSummary {
    std::string verifier, check;
    std::size_t total = 0, failed = 0;
    double worst = -INFINITY;  // largest measured value
    double threshold = 0.0;    // threshold of the worst report
};

inline std::vector<CheckSummary> summarize(const std::vector<VerificationReport>& reports) {
    std::map<std::pair<std::string, std::string>, CheckSummary> m;
    for (const auto& r : reports) {
        auto& s = m[{r.verifier, r.check}];
        s.verifier = r.verifier;
        s.check = r.check;
        ++s.total;
        if (!r.pass) ++s.failed;
        const double v = r.measured();
        if (std::isnan(v) || v > s.worst || s.total == 1) {
            s.worst = v;
            s.threshold = r.threshold;
        }
    }
    std::vector<CheckSummary> out;
    for (auto& [k, s] : m) out.push_back(s);
    return out;
}

inline std::string summary_text(const std::vector<VerificationReport>& reports) {
    std::string out;
    for (const auto& s : summarize(reports)) {
        out += s.verifier + " " + s.check + ": " + std::to_string(s.total - s.failed) + "/" + std::to_string(s.total) + " pass, worst " +
               format_double(s.worst) + " (threshold " + format_double(s.threshold) + ")\n";
    }
    return out;
}

// One panel per (verifier, check): measured value against report index, with the
// threshold as a dashed line. Axes are log10 for positive data.
inline std::string svg_plot(const std::vector<VerificationReport>& reports) {
    const auto groups = summarize(reports);
    const int W = 640, H = 220, pad = 48;
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) + "\" height=\"" +
                    std::to_string(H * std::max<std::size_t>(1, groups.size())) + "\" font-family=\"monospace\" font-size=\"11\">\n";
    auto num = [](double x) {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", x);
        return std::string(b);
    };
    int panel = 0;
    for (const auto& g : groups) {
        std::vector<double> ys;
        std::vector<bool> ok;
        double thr = 0.0;
        for (const auto& r : reports)
            if (r.verifier == g.verifier && r.check == g.check) {
                ys.push_back(r.measured());
                ok.push_back(r.pass);
                thr = r.threshold;
            }
        bool positive = thr > 0.0;
        for (double y : ys) positive = positive && std::isfinite(y) && y > 0.0;
        auto tr = [&](double y) { return positive ? std::log10(y) : y; };
        double lo = tr(thr), hi = tr(thr);
        for (double y : ys)
            if (std::isfinite(tr(y))) {
                lo = std::min(lo, tr(y));
                hi = std::max(hi, tr(y));
            }
        if (hi - lo < 1e-12) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double y0 = panel * H;
        auto px = [&](std::size_t i) { return pad + (W - 2 * pad) * (ys.size() > 1 ? double(i) / double(ys.size() - 1) : 0.5); };
        auto py = [&](double v) { return y0 + H - pad + (std::isfinite(v) ? -(H - 2 * pad) * (v - lo) / (hi - lo) : -(H - 2 * pad)); };
        s += "<text x=\"" + num(pad) + "\" y=\"" + num(y0 + 16) + "\">" + g.verifier + " / " + g.check + (positive ? " (log10)" : "") +
             "</text>\n";
        s += "<rect x=\"" + num(pad) + "\" y=\"" + num(y0 + pad) + "\" width=\"" + num(W - 2 * pad) + "\" height=\"" + num(H - 2 * pad) +
             "\" fill=\"none\" stroke=\"#888\"/>\n";
        s += "<text x=\"2\" y=\"" + num(py(hi) + 4) + "\">" + num(hi) + "</text><text x=\"2\" y=\"" + num(py(lo) + 4) + "\">" + num(lo) + "</text>\n";
        s += "<line x1=\"" + num(pad) + "\" x2=\"" + num(W - pad) + "\" y1=\"" + num(py(tr(thr))) + "\" y2=\"" + num(py(tr(thr))) +
             "\" stroke=\"#c33\" stroke-dasharray=\"4 3\"/>\n";
        for (std::size_t i = 0; i < ys.size(); ++i)
            s += "<circle cx=\"" + num(px(i)) + "\" cy=\"" + num(py(tr(ys[i]))) + "\" r=\"2\" fill=\"" + (ok[i] ? "#2a6" : "#c33") + "\"/>\n";
        ++panel;
    }
    return s + "</svg>\n";
}

} // namespace depthkit
