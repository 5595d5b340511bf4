#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "depthkit/errors.hpp"
#include "depthkit/roots.hpp"

namespace depthkit {

// How a report's pass flag follows from lhs, rhs and threshold:
//   abs   |lhs - rhs| <= threshold
//   rel   |lhs - rhs| / |rhs| <= threshold
//   ratio |lhs| / |rhs| <= threshold
//   value Re lhs <= threshold
enum class Metric { Abs, Rel, Ratio, Value };

inline const char* metric_name(Metric m) {
    switch (m) {
    case Metric::Abs: return "abs";
    case Metric::Rel: return "rel";
    case Metric::Ratio: return "ratio";
    case Metric::Value: return "value";
    }
    return "abs";
}

inline Metric parse_metric(const std::string& s) {
    if (s == "abs") return Metric::Abs;
    if (s == "rel") return Metric::Rel;
    if (s == "ratio") return Metric::Ratio;
    if (s == "value") return Metric::Value;
    throw IoError("unknown metric '" + s + "'");
}

using ParamList = std::vector<std::pair<std::string, double>>;

struct VerificationReport {
    std::string verifier;
    std::string check;
    ParamList params;
    cplx lhs = 0.0, rhs = 0.0;
    double abs_error = 0.0, rel_error = 0.0, ratio = 0.0;
    Metric metric = Metric::Abs;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
    double wall_time = 0.0;  // seconds; never written to report files

    double measured() const {
        switch (metric) {
        case Metric::Abs: return abs_error;
        case Metric::Rel: return rel_error;
        case Metric::Ratio: return ratio;
        case Metric::Value: return lhs.real();
        }
        return abs_error;
    }
};

namespace detail {

inline double safe_div(double a, double b) {
    if (b != 0.0) return a / b;
    return a == 0.0 ? 0.0 : INFINITY;
}

inline bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

} // namespace detail

// Fills the derived fields from lhs, rhs and threshold.
inline void finalize(VerificationReport& r) {
    r.abs_error = std::abs(r.lhs - r.rhs);
    r.rel_error = detail::safe_div(r.abs_error, std::abs(r.rhs));
    r.ratio = detail::safe_div(std::abs(r.lhs), std::abs(r.rhs));
    const double v = r.measured();
    r.pass = std::isfinite(v) && v <= r.threshold;
}

inline VerificationReport make_report(std::string verifier, std::string check, ParamList params, cplx lhs, cplx rhs, Metric metric,
                                      double threshold, std::string note = {}) {
    VerificationReport r;
    r.verifier = std::move(verifier);
    r.check = std::move(check);
    r.params = std::move(params);
    r.lhs = lhs;
    r.rhs = rhs;
    r.metric = metric;
    r.threshold = threshold;
    r.note = std::move(note);
    finalize(r);
    return r;
}

// true when the stored pass flag and errors agree with a recomputation from lhs/rhs
inline bool consistent(const VerificationReport& r) {
    VerificationReport c = r;
    finalize(c);
    return c.pass == r.pass && detail::same_double(c.abs_error, r.abs_error) && detail::same_double(c.rel_error, r.rel_error) &&
           detail::same_double(c.ratio, r.ratio);
}

inline bool operator==(const VerificationReport& a, const VerificationReport& b) {
    using detail::same_double;
    if (a.verifier != b.verifier || a.check != b.check || a.note != b.note || a.pass != b.pass || a.metric != b.metric) return false;
    if (a.params.size() != b.params.size()) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
        if (a.params[i].first != b.params[i].first || !same_double(a.params[i].second, b.params[i].second)) return false;
    return same_double(a.lhs.real(), b.lhs.real()) && same_double(a.lhs.imag(), b.lhs.imag()) && same_double(a.rhs.real(), b.rhs.real()) &&
           same_double(a.rhs.imag(), b.rhs.imag()) && same_double(a.abs_error, b.abs_error) && same_double(a.rel_error, b.rel_error) &&
           same_double(a.ratio, b.ratio) && same_double(a.threshold, b.threshold);
}

enum class Format { JsonLines, Csv };

inline Format parse_format(const std::string& s) {
    if (s == "json" || s == "jsonl" || s == "json-lines") return Format::JsonLines;
    if (s == "csv") return Format::Csv;
    throw ConfigError("unknown format '" + s + "' (json or csv)");
}

// %.17g, with inf / -inf / nan spelled out
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_double(const std::string& s) {
    if (s == "nan") return NAN;
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw IoError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw IoError("not a number: '" + s + "'");
    return v;
}

namespace detail {

// finite doubles as bare JSON numbers, the rest as strings
inline std::string json_number(double x) {
    const std::string s = format_double(x);
    return std::isfinite(x) ? s : "\"" + s + "\"";
}

inline double json_double(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_double(j.get<std::string>());
    throw IoError("expected a number");
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) throw IoError("unterminated quote in csv line");
    return out;
}

} // namespace detail

// One JSON object per line; keys in this fixed order.
inline std::string to_json_line(const VerificationReport& r) {
    using detail::json_number;
    std::string s = "{\"verifier\":" + nlohmann::json(r.verifier).dump() + ",\"check\":" + nlohmann::json(r.check).dump() + ",\"params\":{";
    for (std::size_t i = 0; i < r.params.size(); ++i) {
        if (i) s += ',';
        s += nlohmann::json(r.params[i].first).dump() + ":" + json_number(r.params[i].second);
    }
    s += "},\"lhs\":[" + json_number(r.lhs.real()) + "," + json_number(r.lhs.imag()) + "]";
    s += ",\"rhs\":[" + json_number(r.rhs.real()) + "," + json_number(r.rhs.imag()) + "]";
    s += ",\"abs_error\":" + json_number(r.abs_error);
    s += ",\"rel_error\":" + json_number(r.rel_error);
    s += ",\"ratio\":" + json_number(r.ratio);
    s += std::string(",\"metric\":\"") + metric_name(r.metric) + "\"";
    s += ",\"threshold\":" + json_number(r.threshold);
    s += std::string(",\"pass\":") + (r.pass ? "true" : "false");
    s += ",\"note\":" + nlohmann::json(r.note).dump() + "}";
    return s;
}

inline VerificationReport from_json_line(const std::string& line) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(line);
    } catch (const std::exception& e) {
        throw IoError(std::string("bad json line: ") + e.what());
    }
    try {
        VerificationReport r;
        r.verifier = j.at("verifier").get<std::string>();
        r.check = j.at("check").get<std::string>();
        for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) r.params.emplace_back(it.key(), detail::json_double(*it));
        const auto& l = j.at("lhs");
        const auto& h = j.at("rhs");
        r.lhs = cplx(detail::json_double(l.at(0)), detail::json_double(l.at(1)));
        r.rhs = cplx(detail::json_double(h.at(0)), detail::json_double(h.at(1)));
        r.abs_error = detail::json_double(j.at("abs_error"));
        r.rel_error = detail::json_double(j.at("rel_error"));
        r.ratio = detail::json_double(j.at("ratio"));
        r.metric = parse_metric(j.at("metric").get<std::string>());
        r.threshold = detail::json_double(j.at("threshold"));
        r.pass = j.at("pass").get<bool>();
        r.note = j.at("note").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad report: ") + e.what());
    }
}

inline constexpr const char* kCsvHeader = "verifier,check,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_error,rel_error,ratio,metric,threshold,pass,note";

// params are packed into one column as name=value pairs joined by ';'
inline std::string to_csv_line(const VerificationReport& r) {
    std::string ps;
    for (std::size_t i = 0; i < r.params.size(); ++i) {
        if (i) ps += ';';
        ps += r.params[i].first + "=" + format_double(r.params[i].second);
    }
    std::string s = detail::csv_quote(r.verifier) + "," + detail::csv_quote(r.check) + "," + detail::csv_quote(ps);
    for (double x : {r.lhs.real(), r.lhs.imag(), r.rhs.real(), r.rhs.imag(), r.abs_error, r.rel_error, r.ratio}) s += "," + format_double(x);
    s += std::string(",") + metric_name(r.metric) + "," + format_double(r.threshold) + "," + (r.pass ? "true" : "false");
    s += "," + detail::csv_quote(r.note);
    return s;
}

inline VerificationReport from_csv_line(const std::string& line) {
    const auto f = detail::csv_split(line);
    if (f.size() != 14) throw IoError("csv line has " + std::to_string(f.size()) + " fields, expected 14");
    VerificationReport r;
    r.verifier = f[0];
    r.check = f[1];
    if (!f[2].empty()) {
        std::stringstream ss(f[2]);
        std::string item;
        while (std::getline(ss, item, ';')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw IoError("bad parameter '" + item + "'");
            r.params.emplace_back(item.substr(0, eq), parse_double(item.substr(eq + 1)));
        }
    }
    r.lhs = cplx(parse_double(f[3]), parse_double(f[4]));
    r.rhs = cplx(parse_double(f[5]), parse_double(f[6]));
    r.abs_error = parse_double(f[7]);
    r.rel_error = parse_double(f[8]);
    r.ratio = parse_double(f[9]);
    r.metric = parse_metric(f[10]);
    r.threshold = parse_double(f[11]);
    if (f[12] != "true" && f[12] != "false") throw IoError("bad pass flag '" + f[12] + "'");
    r.pass = f[12] == "true";
    r.note = f[13];
    return r;
}

inline std::string emit_reports(const std::vector<VerificationReport>& reports, Format fmt) {
    std::string out;
    if (fmt == Format::Csv) out += std::string(kCsvHeader) + "\n";
    for (const auto& r : reports) out += (fmt == Format::Csv ? to_csv_line(r) : to_json_line(r)) + "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

inline void emit_report(const std::vector<VerificationReport>& reports, Format fmt, const std::string& path) {
    write_text_file(path, emit_reports(reports, fmt));
}

// Reads json-lines or csv, detected from the first line.
inline std::vector<VerificationReport> parse_reports(const std::string& text) {
    std::vector<VerificationReport> out;
    std::stringstream ss(text);
    std::string line;
    bool first = true, csv = false;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == kCsvHeader) {
                csv = true;
                continue;
            }
            if (line.front() != '{') throw IoError("unrecognized report format");
        }
        out.push_back(csv ? from_csv_line(line) : from_json_line(line));
    }
    return out;
}

inline std::vector<VerificationReport> read_reports(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_reports(ss.str());
}

} // namespace depthkit
