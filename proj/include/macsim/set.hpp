#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "macsim/types.hpp"

namespace macsim {

/// One set of the cache. Owns the per-way line state and keeps the recency
/// ranks a strict permutation 0..valid_count-1 (0 = MRU) at all times.
class CacheSet {
public:
    explicit CacheSet(uint32_t ways) : lines_(ways) {}

    uint32_t ways() const { return static_cast<uint32_t>(lines_.size()); }

    std::span<const LineState> lines() const { return lines_; }

    const LineState& line(uint32_t way) const { return lines_.at(way); }
    LineState& line(uint32_t way) { return lines_.at(way); }

    uint32_t valid_count() const {
        uint32_t n = 0;
        for (const auto& l : lines_)
            if (l.valid) ++n;
        return n;
    }

    bool full() const { return valid_count() == ways(); }

    /// Way holding the tag, or -1.
    int find(uint64_t tag) const {
        for (uint32_t w = 0; w < ways(); ++w)
            if (lines_[w].valid && lines_[w].tag == tag) return static_cast<int>(w);
        return -1;
    }

    /// Lowest-index invalid way, or -1 when the set is full.
    int find_free() const {
        for (uint32_t w = 0; w < ways(); ++w)
            if (!lines_[w].valid) return static_cast<int>(w);
        return -1;
    }

    /// Valid way with the maximal recency rank. Set must be non-empty.
    uint32_t global_lru_way() const {
        int best = -1;
        uint32_t best_rank = 0;
        for (uint32_t w = 0; w < ways(); ++w) {
            if (lines_[w].valid && (best < 0 || lines_[w].recency > best_rank)) {
                best = static_cast<int>(w);
                best_rank = lines_[w].recency;
            }
        }
        if (best < 0) throw std::logic_error("global_lru_way on empty set");
        return static_cast<uint32_t>(best);
    }

    /// Promotes a valid way to rank 0, shifting the ways it overtakes.
    void make_mru(uint32_t way) {
        const uint32_t old_rank = lines_.at(way).recency;
        for (auto& l : lines_)
            if (l.valid && l.recency < old_rank) ++l.recency;
        lines_[way].recency = 0;
    }

    /// Installs a line in an invalid way at MRU. Policy metadata starts empty.
    void install(uint32_t way, uint64_t tag, bool dirty) {
        if (lines_.at(way).valid) throw std::logic_error("install into a valid way");
        for (auto& l : lines_)
            if (l.valid) ++l.recency;
        lines_[way] = LineState{tag, true, dirty, 0, std::monostate{}};
    }

    /// Invalidates a way and closes the rank gap it leaves.
    void evict(uint32_t way) {
        const uint32_t gone_rank = lines_.at(way).recency;
        if (!lines_[way].valid) throw std::logic_error("evict of an invalid way");
        lines_[way] = LineState{};
        for (auto& l : lines_)
            if (l.valid && l.recency > gone_rank) --l.recency;
    }

private:
    std::vector<LineState> lines_;
};

}  // namespace macsim
