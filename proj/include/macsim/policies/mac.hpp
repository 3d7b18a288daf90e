#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "macsim/policy.hpp"

namespace macsim {

// Four protection levels, highest priority first:
//   1 = fresh dirty, 2 = fresh clean, 3 = stale dirty, 4 = stale clean.
// Dirty lines live at levels 1 and 3 only; clean lines at 2 and 4.

inline uint8_t mac_insert_fdl(AccessKind kind) {
    return kind == AccessKind::Write ? 3 : 4;
}

inline uint8_t mac_promote_fdl(uint8_t current_fdl, AccessKind kind) {
    if (current_fdl < 1 || current_fdl > 4) throw std::out_of_range("fdl must be in 1..4");
    if (kind == AccessKind::Write) return 1;
    return (current_fdl == 1 || current_fdl == 3) ? 1 : 2;
}

/// Incremental metadata cost versus plain LRU, in percent of a set's data
/// plus LRU bookkeeping bits.
inline double mac_metadata_overhead(int ways, int line_size_bytes) {
    if (ways <= 0 || line_size_bytes <= 0)
        throw std::out_of_range("mac_metadata_overhead: inputs must be positive");
    return 100.0 * 6.0 / (static_cast<double>(line_size_bytes) * ways + 8.0);
}

struct MacDemotion {
    uint32_t way = 0;
    uint8_t new_fdl = 0;
    bool moved_to_mru = false;
    friend bool operator==(const MacDemotion&, const MacDemotion&) = default;
};

class MacPolicy final : public ReplacementPolicy {
public:
    /// The published pseudo-code disagrees with the prose on which levels the
    /// step-b/c demotions target; the prose targets (clean 2->4, dirty 1->3)
    /// keep dirty lines in dirty levels, the pseudo-code targets (2->3, 1->2)
    /// do not. The pseudo-code behavior is available for comparison only.
    enum class DemotionVariant : uint8_t { Prose, PseudoCode };

    explicit MacPolicy(DemotionVariant variant = DemotionVariant::Prose) : variant_(variant) {}

    void on_hit(CacheSet& set, uint32_t, uint32_t way, const Access& a) override {
        auto& m = std::get<MacMeta>(set.line(way).meta);
        m.fdl = mac_promote_fdl(m.fdl, a.kind);
    }

    void on_insert(CacheSet& set, uint32_t, uint32_t way, const Access& a) override {
        set.line(way).meta = MacMeta{mac_insert_fdl(a.kind)};
    }

    uint32_t select_victim(CacheSet& set, uint32_t) override {
        if (!set.full()) throw std::logic_error("select_victim on a non-full set");
        last_demotions_.clear();

        // Sub-chain LRU of each level, recovered from the global recency ranks.
        // Index k holds the level-(k+1) LRU way, or -1 when the level is empty.
        std::array<int, 4> level_lru{-1, -1, -1, -1};
        std::array<uint32_t, 4> level_lru_rank{};
        for (uint32_t w = 0; w < set.ways(); ++w) {
            const auto& line = set.line(w);
            const uint8_t fdl = std::get<MacMeta>(line.meta).fdl;
            const int k = fdl - 1;
            if (level_lru[k] < 0 || line.recency > level_lru_rank[k]) {
                level_lru[k] = static_cast<int>(w);
                level_lru_rank[k] = line.recency;
            }
        }

        auto demote = [&](int way, uint8_t new_fdl) {
            if (way < 0) return;  // empty level, nothing to demote
            std::get<MacMeta>(set.line(way).meta).fdl = new_fdl;
            set.make_mru(static_cast<uint32_t>(way));
            last_demotions_.push_back({static_cast<uint32_t>(way), new_fdl, true});
        };

        const bool prose = variant_ == DemotionVariant::Prose;
        if (level_lru[3] >= 0) {  // step a: evict the stale-clean LRU
            return static_cast<uint32_t>(level_lru[3]);
        }
        if (level_lru[2] >= 0) {  // step b: evict stale-dirty LRU, age both fresh levels
            demote(level_lru[1], prose ? 4 : 3);
            demote(level_lru[0], prose ? 3 : 2);
            return static_cast<uint32_t>(level_lru[2]);
        }
        if (level_lru[1] >= 0) {  // step c: evict fresh-clean LRU, age the dirty level
            demote(level_lru[0], prose ? 3 : 2);
            return static_cast<uint32_t>(level_lru[1]);
        }
        // step d: everything is level 1
        return static_cast<uint32_t>(level_lru[0]);
    }

    /// Demotions performed by the most recent select_victim call.
    const std::vector<MacDemotion>& last_demotions() const { return last_demotions_; }

private:
    DemotionVariant variant_;
    std::vector<MacDemotion> last_demotions_;
};

}  // namespace macsim
