#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "depthkit/errors.hpp"
#include "depthkit/harness/report.hpp"

namespace depthkit {

struct GridAxis {
    std::string key;
    std::vector<double> values;
};

// One cartesian block of axes; a grid is a union of blocks.
using GridBlock = std::vector<GridAxis>;

struct Grid {
    std::vector<GridBlock> blocks;
    bool empty() const { return blocks.empty(); }
};

using Tuple = ParamList;

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline double grid_number(const std::string& s) {
    try {
        return parse_double(trim(s));
    } catch (const IoError&) {
        throw ConfigError("bad grid value '" + s + "'");
    }
}

inline constexpr std::size_t kAxisCap = 10'000'000;

} // namespace detail

// One axis item: "x", "a..b" (unit step), "a..b:s" (additive step) or "a..b:*f" (geometric).
inline std::vector<double> parse_axis_values(const std::string& spec) {
    std::vector<double> out;
    for (const auto& raw : detail::split(spec, ',')) {
        const std::string item = detail::trim(raw);
        if (item.empty()) continue;
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(detail::grid_number(item));
            continue;
        }
        const double a = detail::grid_number(item.substr(0, dots));
        std::string rest = item.substr(dots + 2);
        double step = 1.0;
        bool geometric = false;
        if (const auto colon = rest.find(':'); colon != std::string::npos) {
            std::string st = detail::trim(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
            if (!st.empty() && st[0] == '*') {
                geometric = true;
                st = st.substr(1);
            }
            step = detail::grid_number(st);
        }
        const double b = detail::grid_number(rest);
        if (geometric ? !(step > 1.0 && a > 0.0) : !(step > 0.0)) throw ConfigError("bad range step in '" + item + "'");
        // tolerate rounding at the endpoint of additive ranges
        const double slack = geometric ? b * 1e-12 : step * 1e-9;
        for (double x = a; x <= b + slack; x = geometric ? x * step : x + step) {
            out.push_back(x);
            if (out.size() > detail::kAxisCap) throw ConfigError("range '" + item + "' too long");
        }
    }
    return out;
}

// "p=3,5;q=1..4|p=7;q=1": blocks separated by '|', axes by ';'. An axis written
// "key=" has no values and empties its block.
inline Grid parse_grid(const std::string& spec) {
    Grid g;
    if (detail::trim(spec).empty()) return g;
    for (const auto& bs : detail::split(spec, '|')) {
        GridBlock block;
        for (const auto& as : detail::split(bs, ';')) {
            const std::string a = detail::trim(as);
            if (a.empty()) continue;
            const auto eq = a.find('=');
            if (eq == std::string::npos) throw ConfigError("grid axis '" + a + "' needs key=values");
            const std::string key = detail::trim(a.substr(0, eq));
            if (key.empty()) throw ConfigError("grid axis '" + a + "' has no key");
            for (const auto& ax : block)
                if (ax.key == key) throw ConfigError("grid axis '" + key + "' given twice");
            block.push_back({key, parse_axis_values(a.substr(eq + 1))});
        }
        g.blocks.push_back(std::move(block));
    }
    return g;
}

inline std::vector<Tuple> expand_block(const GridBlock& block) {
    std::vector<Tuple> out;
    for (const auto& ax : block)
        if (ax.values.empty()) return out;
    std::vector<std::size_t> idx(block.size(), 0);
    while (true) {
        Tuple t;
        for (std::size_t i = 0; i < block.size(); ++i) t.emplace_back(block[i].key, block[i].values[idx[i]]);
        out.push_back(std::move(t));
        std::size_t i = block.size();
        while (i > 0) {
            --i;
            if (++idx[i] < block[i].values.size()) break;
            idx[i] = 0;
            if (i == 0) return out;
        }
        if (block.empty()) return out;
    }
}

// All tuples of all blocks, duplicates dropped (first occurrence kept).
inline std::vector<Tuple> expand_grid(const Grid& g) {
    std::vector<Tuple> out;
    for (const auto& b : g.blocks)
        for (auto& t : expand_block(b))
            if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
    return out;
}

inline std::vector<std::string> grid_keys(const Grid& g) {
    std::vector<std::string> keys;
    for (const auto& b : g.blocks)
        for (const auto& ax : b)
            if (std::find(keys.begin(), keys.end(), ax.key) == keys.end()) keys.push_back(ax.key);
    return keys;
}

// A user grid resolved against a verifier's defaults. A single user block overrides
// the matching axes of every default block; several user blocks each complete their
// missing axes from the first default block. Axes keep the default order.
inline Grid resolve_grid(const Grid& defaults, const Grid& user) {
    if (user.empty()) return defaults;
    const auto known = grid_keys(defaults);
    for (const auto& b : user.blocks)
        for (const auto& ax : b)
            if (std::find(known.begin(), known.end(), ax.key) == known.end()) throw InvalidGrid("unknown grid key '" + ax.key + "'");
    auto lookup = [](const GridBlock& b, const std::string& k) -> const GridAxis* {
        for (const auto& ax : b)
            if (ax.key == k) return &ax;
        return nullptr;
    };
    Grid out;
    if (user.blocks.size() == 1) {
        for (const auto& db : defaults.blocks) {
            GridBlock nb = db;
            for (auto& ax : nb)
                if (const GridAxis* u = lookup(user.blocks[0], ax.key)) ax.values = u->values;
            out.blocks.push_back(std::move(nb));
        }
        return out;
    }
    const GridBlock base = defaults.blocks.empty() ? GridBlock{} : defaults.blocks.front();
    for (const auto& ub : user.blocks) {
        GridBlock nb = base;
        for (auto& ax : nb)
            if (const GridAxis* u = lookup(ub, ax.key)) ax.values = u->values;
        for (const auto& ax : ub)
            if (!lookup(nb, ax.key)) nb.push_back(ax);
        out.blocks.push_back(std::move(nb));
    }
    return out;
}

inline double param(const Tuple& t, const std::string& key) {
    for (const auto& [k, v] : t)
        if (k == key) return v;
    throw InvalidGrid("tuple lacks key '" + key + "'");
}

inline i64 iparam(const Tuple& t, const std::string& key) {
    const double v = param(t, key);
    if (!(std::abs(v) < 9.0e15) || v != std::floor(v)) throw InvalidGrid("key '" + key + "' needs an integer, got " + format_double(v));
    return static_cast<i64>(v);
}

inline std::string describe(const Tuple& t) {
    std::string s;
    for (const auto& [k, v] : t) s += (s.empty() ? "" : " ") + k + "=" + format_double(v);
    return s;
}

} // namespace depthkit
