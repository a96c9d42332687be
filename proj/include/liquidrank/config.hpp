// Flat `key = value` configuration files.
//
// Keys mirror the EngineConfig / ConsensusConfig / SimulationConfig field
// names. Per-aspect weights use `aspect_weight.<aspect>` and per-agency
// reputations `agency_reputation.<agency>`. `#` starts a comment. Unknown keys
// and malformed values are ConfigErrors.

#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

#include "consensus.hpp"
#include "engine.hpp"

namespace liquidrank {

struct RunConfig {
    EngineConfig engine;
    SimulationConfig simulation;  // simulation.engine mirrors `engine` after parsing
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double config_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
    return out;
}

template <class Int>
Int config_int(std::string_view key, std::string_view v) {
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
    return out;
}

inline bool config_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("'" + std::string(key) + "' expects true or false, got '" + std::string(v) + "'");
}

inline void apply_key(RunConfig& rc, std::string_view key, std::string_view v) {
    auto& e = rc.engine;
    auto& s = rc.simulation;
    auto& c = s.consensus;
    if (key == "default_reputation") e.default_reputation = config_double(key, v);
    else if (key == "default_aspect_weight") e.default_aspect_weight = config_double(key, v);
    else if (key.rfind("aspect_weight.", 0) == 0 && key.size() > 14)
        e.aspect_weights[std::string(key.substr(14))] = config_double(key, v);
    else if (key == "blend_stake") e.blend_stake = config_double(key, v);
    else if (key == "blend_transaction") e.blend_transaction = config_double(key, v);
    else if (key == "use_log_financial") e.use_log_financial = config_bool(key, v);
    else if (key == "use_log_differential") e.use_log_differential = config_bool(key, v);
    else if (key == "decay_recent") e.decay_recent = config_double(key, v);
    else if (key == "decay_past") e.decay_past = config_double(key, v);
    else if (key == "rater_weight_floor") e.rater_weight_floor = config_double(key, v);
    else if (key == "min_identical") c.min_identical = config_int<std::uint32_t>(key, v);
    else if (key == "max_nonidentical") c.max_nonidentical = config_int<std::uint32_t>(key, v);
    else if (key == "timeout") c.timeout = config_int<Tick>(key, v);
    else if (key == "por_weighted") c.por_weighted = config_bool(key, v);
    else if (key.rfind("agency_reputation.", 0) == 0 && key.size() > 18)
        c.agency_reputations[AgencyId(std::string(key.substr(18)))] = config_double(key, v);
    else if (key == "cycles") s.cycles = config_int<std::size_t>(key, v);
    else if (key == "cycle_length") s.cycle_length = config_int<Tick>(key, v);
    else if (key == "delay_min") s.network.delay_min = config_int<Tick>(key, v);
    else if (key == "delay_max") s.network.delay_max = config_int<Tick>(key, v);
    else if (key == "drop_probability") s.network.drop_probability = config_double(key, v);
    else if (key == "reward_slots") s.reward_slots = config_int<std::size_t>(key, v);
    else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
    RunConfig rc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const auto key = detail::trim(view.substr(0, eq));
        const auto value = detail::trim(view.substr(eq + 1));
        try {
            detail::apply_key(rc, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    rc.engine.validate();
    rc.simulation.consensus.validate();
    rc.simulation.engine = rc.engine;
    return rc;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config(in);
}

}  // namespace liquidrank
