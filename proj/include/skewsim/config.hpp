#pragma once

#include "skewsim/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace skewsim {

/// Architecture parameters of one generated implementation.
struct ArchConfig {
    std::uint32_t n_prepe = 8;
    std::uint32_t m_pripe = 16;
    std::uint32_t x_secpe = 0;
    std::uint32_t ii_prepe = 1;
    std::uint32_t ii_pripe = 2;
    std::uint32_t w_mem = 64;    // bytes per cycle
    std::uint32_t w_tuple = 8;   // bytes per tuple
    std::uint32_t channel_depth = 512;
    std::uint32_t profiling_cycles = 256;
    std::uint32_t monitor_window = 1024;
    double throughput_threshold = 0.8;  // 0 disables rescheduling
    std::uint32_t reschedule_overhead = 4096;
    std::uint64_t bram_capacity_c = std::uint64_t{1} << 24;  // 0 = unconstrained
    std::uint64_t seed = 0;

    std::uint32_t tuples_per_fetch() const { return w_mem / w_tuple; }
    std::uint32_t total_pes() const { return m_pripe + x_secpe; }

    friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

/// Returns `raw` unchanged if every invariant holds, otherwise throws
/// ConfigError naming the first violated one.
ArchConfig validate_config(const ArchConfig& raw);

/// Sets one field by its name (the struct member name). Throws ConfigError on
/// an unknown key or a malformed value.
void set_config_field(ArchConfig& cfg, std::string_view key, std::string_view value);

/// Parses flat `key = value` lines; `#` starts a comment. Keys are the
/// ArchConfig member names. Unknown keys are errors, reported with the line.
ArchConfig parse_config(std::istream& in, ArchConfig base = {});
ArchConfig load_config_file(const std::string& path, ArchConfig base = {});

void write_config(std::ostream& out, const ArchConfig& cfg);

}  // namespace skewsim
