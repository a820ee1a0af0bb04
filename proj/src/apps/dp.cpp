#include "skewsim/apps/dp.hpp"

#include <algorithm>
#include <string>

namespace skewsim {

DpApp::DpApp(std::uint32_t fanout, std::uint32_t m, std::uint32_t buffer_line)
    : fanout_(fanout), m_(m), buffer_line_(buffer_line) {
    if (m == 0 || fanout == 0 || fanout % m != 0) {
        throw ConfigError("dp: fanout (" + std::to_string(fanout) + ") must be a positive multiple of M (" +
                          std::to_string(m) + ")");
    }
    if (buffer_line == 0) throw ConfigError("dp: buffer_line must be at least 1");
}

DpApp::State DpApp::make_state(std::uint32_t) const {
    State s;
    s.partitions.resize(fanout_ / m_);
    for (auto& p : s.partitions) p.line.reserve(buffer_line_);
    return s;
}

void DpApp::process(State& s, const Payload& p) const {
    auto& part = s.partitions[partition_of(p.index) / m_];
    part.line.push_back(TupleRecord{p.index, p.value});
    if (part.line.size() == buffer_line_) {
        part.region.insert(part.region.end(), part.line.begin(), part.line.end());
        part.line.clear();
    }
}

void DpApp::combine(State& into, State&& from) const {
    // `from` is done: its partial lines are flushed behind its full ones.
    for (std::size_t i = 0; i < into.partitions.size(); ++i) {
        auto& dst = into.partitions[i].region;
        auto& src = from.partitions[i];
        dst.insert(dst.end(), src.region.begin(), src.region.end());
        dst.insert(dst.end(), src.line.begin(), src.line.end());
    }
}

DpApp::Result DpApp::finalize(std::vector<State> ranges) const {
    Result out(fanout_);
    for (std::uint32_t r = 0; r < ranges.size(); ++r) {
        for (std::size_t local = 0; local < ranges[r].partitions.size(); ++local) {
            auto& part = ranges[r].partitions[local];
            auto& dst = out[local * m_ + r];
            dst = std::move(part.region);
            dst.insert(dst.end(), part.line.begin(), part.line.end());
        }
    }
    return out;
}

bool same_partitions(const DpApp::Result& a, const DpApp::Result& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        auto x = a[i];
        auto y = b[i];
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        if (x != y) return false;
    }
    return true;
}

}  // namespace skewsim
