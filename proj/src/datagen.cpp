#include "skewsim/datagen.hpp"

#include "skewsim/hash.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace skewsim {

namespace {

// log1p(x) / x and expm1(x) / x, with series near zero.
double helper1(double x) {
    if (std::abs(x) > 1e-8) return std::log1p(x) / x;
    return 1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x));
}

double helper2(double x) {
    if (std::abs(x) > 1e-8) return std::expm1(x) / x;
    return 1.0 + x * 0.5 * (1.0 + x * (1.0 / 3.0) * (1.0 + 0.25 * x));
}

constexpr std::array<char, 4> kMagic{'S', 'K', 'T', 'P'};

void put_le(std::ostream& out, std::uint64_t v, unsigned bytes) {
    for (unsigned i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, unsigned bytes, const std::string& path) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < bytes; ++i) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof()) throw DataError(path + ": truncated tuple file");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

}  // namespace

ZipfSampler::ZipfSampler(std::uint64_t n, double alpha) : n_(n), alpha_(alpha) {
    if (n == 0) throw ConfigError("zipf: domain must be at least 1");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("zipf: alpha must be finite and >= 0");
    h_integral_x1_ = h_integral(1.5) - 1.0;
    h_integral_n_ = h_integral(static_cast<double>(n) + 0.5);
    s_ = 2.0 - h_integral_inverse(h_integral(2.5) - h(2.0));
}

double ZipfSampler::h(double x) const { return std::exp(-alpha_ * std::log(x)); }

double ZipfSampler::h_integral(double x) const {
    const double log_x = std::log(x);
    return helper2((1.0 - alpha_) * log_x) * log_x;
}

double ZipfSampler::h_integral_inverse(double x) const {
    double t = x * (1.0 - alpha_);
    if (t < -1.0) t = -1.0;
    return std::exp(helper1(t) * x);
}

std::uint64_t ZipfSampler::operator()(Rng& rng) const {
    if (alpha_ == 0.0) return 1 + rng.below(n_);
    for (;;) {
        const double u = h_integral_n_ + rng.unit() * (h_integral_x1_ - h_integral_n_);
        const double x = h_integral_inverse(u);
        double kd = std::floor(x + 0.5);
        kd = std::clamp(kd, 1.0, static_cast<double>(n_));
        const auto k = static_cast<std::uint64_t>(kd);
        if (kd - x <= s_ || u >= h_integral(kd + 0.5) - h(kd)) return k;
    }
}

RankShuffle::RankShuffle(std::uint64_t domain, std::uint64_t seed) : domain_(domain), mult_(1), offset_(0) {
    if (domain == 0) throw ConfigError("zipf: domain must be at least 1");
    if (domain == 1) return;
    Rng rng(mix64(seed ^ 0x5a17f00dULL));
    offset_ = rng.below(domain);
    do {
        mult_ = 1 + rng.below(domain - 1);
    } while (std::gcd(mult_, domain) != 1);
}

std::uint64_t RankShuffle::key(std::uint64_t rank) const {
    const auto scaled = static_cast<unsigned __int128>(mult_) * ((rank - 1) % domain_) + offset_;
    return static_cast<std::uint64_t>(scaled % domain_);
}

std::uint64_t zipf_hot_key(std::uint64_t domain, std::uint64_t seed) { return RankShuffle(domain, seed).key(1); }

std::vector<TupleRecord> gen_zipf(std::uint64_t n, double alpha, std::uint64_t domain, std::uint64_t seed) {
    const ZipfSampler zipf(domain, alpha);
    const RankShuffle shuffle(domain, seed);
    Rng rng(seed);
    std::vector<TupleRecord> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back({shuffle.key(zipf(rng)), i});
    return out;
}

std::vector<TupleRecord> gen_single_key(std::uint64_t n, std::uint64_t key) {
    std::vector<TupleRecord> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back({key, i});
    return out;
}

std::vector<TupleRecord> gen_evolving(std::uint64_t n, double alpha, std::uint64_t interval, std::uint64_t domain,
                                      std::span<const std::uint64_t> seeds) {
    if (interval == 0) throw ConfigError("evolving: interval must be positive");
    if (seeds.empty()) throw ConfigError("evolving: seed schedule is empty");
    std::vector<TupleRecord> out;
    out.reserve(n);
    for (std::uint64_t segment = 0; out.size() < n; ++segment) {
        const auto len = std::min<std::uint64_t>(interval, n - out.size());
        const auto base = out.size();
        for (auto t : gen_zipf(len, alpha, domain, seeds[segment % seeds.size()])) {
            out.push_back({t.key, base + t.value});
        }
    }
    return out;
}

std::vector<TupleRecord> gen_graph(std::uint32_t vertices, double avg_degree, double skew, std::uint64_t seed) {
    if (vertices == 0) throw ConfigError("graph: need at least one vertex");
    if (!(avg_degree >= 0.0)) throw ConfigError("graph: average degree must be >= 0");
    const auto edges = static_cast<std::uint64_t>(std::llround(avg_degree * vertices));
    const ZipfSampler zipf(vertices, skew);
    const RankShuffle shuffle(vertices, seed);
    Rng rng(seed);
    std::vector<TupleRecord> out;
    out.reserve(edges);
    for (std::uint64_t i = 0; i < edges; ++i) {
        const auto src = rng.below(vertices);
        out.push_back({src, shuffle.key(zipf(rng))});
    }
    return out;
}

std::vector<TupleRecord> load_edge_list(const std::string& path, std::optional<std::uint64_t> vertices) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list '" + path + "'");
    std::vector<TupleRecord> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto cut = line.find_first_of("#%"); cut != std::string::npos) line.erase(cut);
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a)) continue;
        const auto where = path + ":" + std::to_string(lineno) + ": ";
        if (!(fields >> b) || (fields >> extra)) throw DataError(where + "expected 'src dst'");
        TupleRecord e;
        try {
            std::size_t used_a = 0, used_b = 0;
            e.key = std::stoull(a, &used_a);
            e.value = std::stoull(b, &used_b);
            if (used_a != a.size() || used_b != b.size() || a[0] == '-' || b[0] == '-') throw std::invalid_argument("");
        } catch (const std::logic_error&) {
            throw DataError(where + "vertex ids must be non-negative integers");
        }
        if (vertices && (e.key >= *vertices || e.value >= *vertices)) {
            throw DataError(where + "vertex id out of range (graph has " + std::to_string(*vertices) + " vertices)");
        }
        out.push_back(e);
    }
    return out;
}

void write_edge_list(const std::string& path, std::span<const TupleRecord> edges) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write edge list '" + path + "'");
    for (const auto& e : edges) out << e.key << ' ' << e.value << '\n';
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::uint64_t vertex_count(std::span<const TupleRecord> edges) {
    std::uint64_t n = 0;
    for (const auto& e : edges) n = std::max({n, e.key + 1, e.value + 1});
    return n;
}

void write_tuples(const std::string& path, std::span<const TupleRecord> data, std::uint16_t tuple_width) {
    if (tuple_width != 2 && tuple_width != 4 && tuple_width != 8 && tuple_width != 16) {
        throw ConfigError("tuple width must be 2, 4, 8 or 16 bytes");
    }
    const unsigned field = tuple_width / 2;
    const std::uint64_t limit = field == 8 ? ~std::uint64_t{0} : (std::uint64_t{1} << (8 * field)) - 1;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write tuple file '" + path + "'");
    out.write(kMagic.data(), kMagic.size());
    put_le(out, kTupleFileVersion, 2);
    put_le(out, tuple_width, 2);
    put_le(out, data.size(), 8);
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].key > limit || data[i].value > limit) {
            throw DataError("tuple " + std::to_string(i) + " does not fit in " + std::to_string(tuple_width) +
                            "-byte tuples");
        }
        put_le(out, data[i].key, field);
        put_le(out, data[i].value, field);
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<TupleRecord> read_tuples(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open tuple file '" + path + "'");
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw DataError(path + ": not an SKTP tuple file");
    const auto version = get_le(in, 2, path);
    if (version != kTupleFileVersion) throw DataError(path + ": unsupported version " + std::to_string(version));
    const auto width = get_le(in, 2, path);
    if (width != 2 && width != 4 && width != 8 && width != 16) {
        throw DataError(path + ": invalid tuple width " + std::to_string(width));
    }
    const auto count = get_le(in, 8, path);
    const auto field = static_cast<unsigned>(width / 2);
    std::vector<TupleRecord> out;
    out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 26)));
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto key = get_le(in, field, path);
        out.push_back({key, get_le(in, field, path)});
    }
    if (in.peek() != std::char_traits<char>::eof()) throw DataError(path + ": trailing bytes after last tuple");
    return out;
}

}  // namespace skewsim
