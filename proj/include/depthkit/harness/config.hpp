#pragma once

#include <yaml-cpp/yaml.h>

#include <optional>
#include <string>
#include <thread>

#include "depthkit/errors.hpp"
#include "depthkit/harness/grid.hpp"
#include "depthkit/harness/report.hpp"

namespace depthkit {

struct RunConfig {
    std::string verifier;
    Grid grid;                            // user grid; empty means the verifier's defaults
    bool grid_given = false;
    std::optional<double> tolerance;      // overrides the verifier's primary tolerance
    std::optional<double> ratio_ceiling;  // overrides the verifier's ratio ceiling
    int jobs = 0;                         // 0: hardware concurrency
    u64 seed = 1;
    std::string out;                      // empty: stdout
    Format format = Format::JsonLines;

    int worker_count() const {
        if (jobs > 0) return jobs;
        const unsigned h = std::thread::hardware_concurrency();
        return h == 0 ? 1 : static_cast<int>(h);
    }
};

namespace detail {

inline std::string yaml_axis_values(const YAML::Node& n) {
    if (n.IsScalar()) return n.as<std::string>();
    if (n.IsNull()) return {};
    if (!n.IsSequence()) throw ConfigError("grid axis values must be a scalar or a list");
    std::string s;
    for (const auto& v : n) {
        if (!v.IsScalar()) throw ConfigError("grid axis list entries must be scalars");
        s += (s.empty() ? "" : ",") + v.as<std::string>();
    }
    return s;
}

inline GridBlock yaml_block(const YAML::Node& n) {
    if (!n.IsMap()) throw ConfigError("grid block must be a mapping of key to values");
    std::string spec;
    for (const auto& kv : n) spec += (spec.empty() ? "" : ";") + kv.first.as<std::string>() + "=" + yaml_axis_values(kv.second);
    Grid g = parse_grid(spec);
    return g.blocks.empty() ? GridBlock{} : g.blocks.front();
}

} // namespace detail

// grid: either an inline string, a mapping key -> values, or a list of mappings (blocks)
inline Grid yaml_grid(const YAML::Node& n) {
    if (n.IsScalar()) return parse_grid(n.as<std::string>());
    Grid g;
    if (n.IsMap()) {
        g.blocks.push_back(detail::yaml_block(n));
    } else if (n.IsSequence()) {
        for (const auto& b : n) g.blocks.push_back(detail::yaml_block(b));
    } else if (!n.IsNull()) {
        throw ConfigError("grid must be a string, mapping or list of mappings");
    }
    return g;
}

inline void apply_config_node(const YAML::Node& root, RunConfig& cfg) {
    if (!root.IsMap()) throw ConfigError("config root must be a mapping");
    try {
        for (const auto& kv : root) {
            const std::string key = kv.first.as<std::string>();
            const YAML::Node& v = kv.second;
            if (key == "verifier") cfg.verifier = v.as<std::string>();
            else if (key == "grid") {
                cfg.grid = yaml_grid(v);
                cfg.grid_given = true;
            } else if (key == "tolerance") cfg.tolerance = v.as<double>();
            else if (key == "ratio_ceiling" || key == "ratio-ceiling") cfg.ratio_ceiling = v.as<double>();
            else if (key == "jobs") cfg.jobs = v.as<int>();
            else if (key == "seed") cfg.seed = v.as<u64>();
            else if (key == "out") cfg.out = v.as<std::string>();
            else if (key == "format") cfg.format = parse_format(v.as<std::string>());
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config value: ") + e.what());
    }
    if (cfg.jobs < 0) throw ConfigError("jobs must be >= 0");
}

inline void load_config_file(const std::string& path, RunConfig& cfg) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw ConfigError("cannot read config '" + path + "'");
    } catch (const YAML::Exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    apply_config_node(root, cfg);
}

inline void load_config_string(const std::string& text, RunConfig& cfg) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    apply_config_node(root, cfg);
}

} // namespace depthkit
