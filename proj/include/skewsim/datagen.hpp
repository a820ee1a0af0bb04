#pragma once

#include "skewsim/rng.hpp"
#include "skewsim/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewsim {

/// Malformed dataset or edge-list input.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zipf ranks in [1, n] with P(k) proportional to k^-alpha, drawn by
/// rejection-inversion. alpha = 0 degenerates to uniform.
class ZipfSampler {
public:
    ZipfSampler(std::uint64_t n, double alpha);

    std::uint64_t operator()(Rng& rng) const;

    std::uint64_t size() const { return n_; }
    double alpha() const { return alpha_; }

private:
    double h(double x) const;
    double h_integral(double x) const;
    double h_integral_inverse(double x) const;

    std::uint64_t n_;
    double alpha_;
    double h_integral_x1_ = 0.0;
    double h_integral_n_ = 0.0;
    double s_ = 0.0;
};

/// Seeded bijection from Zipf rank (1-based) to a key in [0, domain).
class RankShuffle {
public:
    RankShuffle(std::uint64_t domain, std::uint64_t seed);
    std::uint64_t key(std::uint64_t rank) const;

private:
    std::uint64_t domain_;
    std::uint64_t mult_;
    std::uint64_t offset_;
};

/// Most frequent key of gen_zipf(.., domain, seed).
std::uint64_t zipf_hot_key(std::uint64_t domain, std::uint64_t seed);

/// n tuples with Zipf(alpha) keys over [0, domain); value = stream index.
std::vector<TupleRecord> gen_zipf(std::uint64_t n, double alpha, std::uint64_t domain, std::uint64_t seed);

/// n tuples that all carry `key`; value = stream index.
std::vector<TupleRecord> gen_single_key(std::uint64_t n, std::uint64_t key);

/// Consecutive Zipf segments of `interval` tuples; segment i uses
/// seeds[i % seeds.size()], so the hot key moves between segments.
std::vector<TupleRecord> gen_evolving(std::uint64_t n, double alpha, std::uint64_t interval, std::uint64_t domain,
                                      std::span<const std::uint64_t> seeds);

/// round(vertices * avg_degree) edges (key = src, value = dst). Sources are
/// uniform; destinations follow Zipf(skew) over a seeded vertex permutation.
std::vector<TupleRecord> gen_graph(std::uint32_t vertices, double avg_degree, double skew, std::uint64_t seed);

/// Text edge list: one "src dst" pair per line, '#' or '%' starts a comment.
/// With `vertices`, ids must be below it.
std::vector<TupleRecord> load_edge_list(const std::string& path, std::optional<std::uint64_t> vertices = {});
void write_edge_list(const std::string& path, std::span<const TupleRecord> edges);

/// Largest vertex id + 1 (0 for an empty list).
std::uint64_t vertex_count(std::span<const TupleRecord> edges);

/// Binary tuple file: "SKTP", u16 version, u16 tuple width in bytes, u64
/// count, then key/value pairs of width/2 bytes each, all little-endian.
inline constexpr std::uint16_t kTupleFileVersion = 1;
void write_tuples(const std::string& path, std::span<const TupleRecord> data, std::uint16_t tuple_width = 8);
std::vector<TupleRecord> read_tuples(const std::string& path);

}  // namespace skewsim
