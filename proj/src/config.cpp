#include "skewsim/config.hpp"

#include "skewsim/types.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <istream>

namespace skewsim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_unsigned(std::string_view key, std::string_view text) {
    T out{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key) +
                          ": expected a non-negative integer");
    }
    return out;
}

double parse_double(std::string_view key, std::string_view text) {
    // from_chars for double is missing from older libstdc++; stod is fine here.
    std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw ConfigError("invalid value '" + s + "' for " + std::string(key) + ": expected a number");
    }
    return v;
}

}  // namespace

ArchConfig validate_config(const ArchConfig& raw) {
    if (raw.n_prepe < 1) throw ConfigError("n_prepe must be at least 1");
    if (raw.n_prepe > 16) throw ConfigError("n_prepe must be at most 16 (router lanes)");
    if (raw.m_pripe < 1) throw ConfigError("m_pripe must be at least 1");
    if (raw.x_secpe > raw.m_pripe - 1) throw ConfigError("x_secpe exceeds M-1");
    if (raw.ii_prepe < 1) throw ConfigError("ii_prepe must be at least 1");
    if (raw.ii_pripe < 1) throw ConfigError("ii_pripe must be at least 1");
    // A batch can put one tuple per lane into the same channel and is
    // delivered whole, so shallower channels could stall forever.
    if (raw.channel_depth < raw.n_prepe) throw ConfigError("channel_depth must be at least n_prepe");
    if (raw.w_tuple < 1 || raw.w_mem < 1) throw ConfigError("w_mem and w_tuple must be at least 1");
    if (raw.w_mem % raw.w_tuple != 0) throw ConfigError("w_tuple must divide w_mem");
    if (!(raw.throughput_threshold >= 0.0 && raw.throughput_threshold <= 1.0)) {
        throw ConfigError("throughput_threshold must lie in [0,1]");
    }
    if (raw.profiling_cycles < 1) throw ConfigError("profiling_cycles must be at least 1");
    if (raw.monitor_window < 1) throw ConfigError("monitor_window must be at least 1");
    return raw;
}

void set_config_field(ArchConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    auto u32 = [&](std::uint32_t& field) { field = parse_unsigned<std::uint32_t>(key, value); };
    auto u64 = [&](std::uint64_t& field) { field = parse_unsigned<std::uint64_t>(key, value); };
    if (key == "n_prepe") u32(cfg.n_prepe);
    else if (key == "m_pripe") u32(cfg.m_pripe);
    else if (key == "x_secpe") u32(cfg.x_secpe);
    else if (key == "ii_prepe") u32(cfg.ii_prepe);
    else if (key == "ii_pripe") u32(cfg.ii_pripe);
    else if (key == "w_mem") u32(cfg.w_mem);
    else if (key == "w_tuple") u32(cfg.w_tuple);
    else if (key == "channel_depth") u32(cfg.channel_depth);
    else if (key == "profiling_cycles") u32(cfg.profiling_cycles);
    else if (key == "monitor_window") u32(cfg.monitor_window);
    else if (key == "throughput_threshold") cfg.throughput_threshold = parse_double(key, value);
    else if (key == "reschedule_overhead") u32(cfg.reschedule_overhead);
    else if (key == "bram_capacity_c") u64(cfg.bram_capacity_c);
    else if (key == "seed") u64(cfg.seed);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ArchConfig parse_config(std::istream& in, ArchConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        try {
            set_config_field(base, trim(view.substr(0, eq)), view.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

ArchConfig load_config_file(const std::string& path, ArchConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_config(in, base);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_config(std::ostream& out, const ArchConfig& cfg) {
    out << "n_prepe = " << cfg.n_prepe << '\n'
        << "m_pripe = " << cfg.m_pripe << '\n'
        << "x_secpe = " << cfg.x_secpe << '\n'
        << "ii_prepe = " << cfg.ii_prepe << '\n'
        << "ii_pripe = " << cfg.ii_pripe << '\n'
        << "w_mem = " << cfg.w_mem << '\n'
        << "w_tuple = " << cfg.w_tuple << '\n'
        << "channel_depth = " << cfg.channel_depth << '\n'
        << "profiling_cycles = " << cfg.profiling_cycles << '\n'
        << "monitor_window = " << cfg.monitor_window << '\n'
        << "throughput_threshold = " << cfg.throughput_threshold << '\n'
        << "reschedule_overhead = " << cfg.reschedule_overhead << '\n'
        << "bram_capacity_c = " << cfg.bram_capacity_c << '\n'
        << "seed = " << cfg.seed << '\n';
}

}  // namespace skewsim
