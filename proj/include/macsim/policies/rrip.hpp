#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

#include "macsim/policy.hpp"
#include "macsim/rng.hpp"

namespace macsim {

// SRRIP/BRRIP/DRRIP mechanics are not given in the MAC paper; they follow the
// original RRIP formulation (hit-priority promotion, lowest-index tie-break).

struct RripParams {
    int rrpv_bits = 2;
    int64_t brrip_epsilon_denominator = 32;

    uint8_t max_rrpv() const { return static_cast<uint8_t>((1u << rrpv_bits) - 1); }

    static RripParams from_config(const CacheConfig& c) {
        RripParams p;
        p.rrpv_bits = static_cast<int>(c.param("rrpv_bits", 2));
        p.brrip_epsilon_denominator = c.param("brrip_epsilon_denominator", 32);
        if (p.rrpv_bits < 1 || p.rrpv_bits > 8)
            throw std::invalid_argument("rrpv_bits must be in 1..8");
        if (p.brrip_epsilon_denominator < 1)
            throw std::invalid_argument("brrip_epsilon_denominator must be positive");
        return p;
    }
};

enum class RripInsertFlavor : uint8_t { Srrip, Brrip, RwaRead, RwaWrite };

inline uint8_t rrip_insert_value(RripInsertFlavor flavor, const RripParams& p, Rng& rng) {
    const uint8_t max = p.max_rrpv();
    switch (flavor) {
    case RripInsertFlavor::Srrip: return static_cast<uint8_t>(max - 1);
    case RripInsertFlavor::Brrip:
        // Long re-reference prediction most of the time, intermediate once
        // every epsilon-denominator insertions.
        return rng.one_in(static_cast<uint64_t>(p.brrip_epsilon_denominator))
                   ? static_cast<uint8_t>(max - 1)
                   : max;
    case RripInsertFlavor::RwaRead: return static_cast<uint8_t>(max - 1);
    case RripInsertFlavor::RwaWrite: return 0;  // safest position for a dirty fill
    }
    throw std::logic_error("unknown insert flavor");
}

inline uint8_t rrip_promote(uint8_t /*current_rrpv*/) { return 0; }

struct RripVictimResult {
    uint32_t way = 0;
    uint32_t rounds_of_increment = 0;
};

/// Shared victim search: age every line until some way saturates, then take
/// the lowest-index saturated way. GetRrpv/SetRrpv abstract over the meta
/// layout so the sub-block policy can reuse the search.
template <typename GetRrpv, typename SetRrpv>
RripVictimResult rrip_victim_search(CacheSet& set, uint8_t max_rrpv, GetRrpv get, SetRrpv put) {
    if (!set.full()) throw std::logic_error("select_victim on a non-full set");
    RripVictimResult r;
    for (;;) {
        for (uint32_t w = 0; w < set.ways(); ++w) {
            if (get(w) == max_rrpv) {
                r.way = w;
                return r;
            }
        }
        for (uint32_t w = 0; w < set.ways(); ++w) put(w, static_cast<uint8_t>(get(w) + 1));
        ++r.rounds_of_increment;
    }
}

class SrripPolicy : public ReplacementPolicy {
public:
    SrripPolicy(const CacheConfig& c, uint64_t seed) : params_(RripParams::from_config(c)), rng_(seed) {}

    void on_hit(CacheSet& set, uint32_t, uint32_t way, const Access&) override {
        auto& m = std::get<RripMeta>(set.line(way).meta);
        m.rrpv = rrip_promote(m.rrpv);
    }

    uint32_t select_victim(CacheSet& set, uint32_t) override {
        return rrip_victim_search(
                   set, params_.max_rrpv(),
                   [&](uint32_t w) { return std::get<RripMeta>(set.line(w).meta).rrpv; },
                   [&](uint32_t w, uint8_t v) { std::get<RripMeta>(set.line(w).meta).rrpv = v; })
            .way;
    }

    void on_insert(CacheSet& set, uint32_t set_index, uint32_t way, const Access& a) override {
        set.line(way).meta =
            RripMeta{rrip_insert_value(insert_flavor(set_index, a.kind), params_, rng_)};
    }

protected:
    virtual RripInsertFlavor insert_flavor(uint32_t /*set_index*/, AccessKind /*kind*/) {
        return RripInsertFlavor::Srrip;
    }

    RripParams params_;
    Rng rng_;
};

class BrripPolicy final : public SrripPolicy {
public:
    using SrripPolicy::SrripPolicy;

protected:
    RripInsertFlavor insert_flavor(uint32_t, AccessKind) override {
        return RripInsertFlavor::Brrip;
    }
};

/// Read-write-aware insertion: a write-back fill starts at the safest
/// position, a read fill at the usual intermediate one. Hits promote to 0
/// for both kinds.
class RwaPolicy final : public SrripPolicy {
public:
    using SrripPolicy::SrripPolicy;

protected:
    RripInsertFlavor insert_flavor(uint32_t, AccessKind kind) override {
        return kind == AccessKind::Write ? RripInsertFlavor::RwaWrite : RripInsertFlavor::RwaRead;
    }
};

/// Set-dueling state steered by memory writes: dirty evictions in dedicated
/// sets move the selector, follower sets pick the flavor currently blamed
/// for fewer writes.
class DuelState {
public:
    enum class SetRole : uint8_t { SrripDedicated, BrripDedicated, Follower };

    DuelState(uint32_t num_sets, uint32_t dedicated_per_flavor, int psel_bits,
              int64_t write_weight)
        : psel_bits_(psel_bits), write_weight_(write_weight) {
        if (psel_bits < 1 || psel_bits > 31) throw std::invalid_argument("psel_bits must be in 1..31");
        if (write_weight < 0) throw std::invalid_argument("write_weight must be non-negative");
        const uint32_t d = std::min(dedicated_per_flavor, num_sets / 2);
        stride_ = d == 0 ? 0 : num_sets / d;
        psel_ = midpoint();
    }

    int64_t psel_max() const { return (int64_t{1} << psel_bits_) - 1; }
    int64_t midpoint() const { return int64_t{1} << (psel_bits_ - 1); }
    int64_t psel() const { return psel_; }
    void set_psel(int64_t v) { psel_ = std::clamp<int64_t>(v, 0, psel_max()); }

    SetRole role(uint32_t set_index) const {
        if (stride_ == 0) return SetRole::Follower;
        const uint32_t r = set_index % stride_;
        if (r == 0) return SetRole::SrripDedicated;
        if (r == 1) return SetRole::BrripDedicated;
        return SetRole::Follower;
    }

    RripInsertFlavor flavor_for_set(uint32_t set_index) const {
        switch (role(set_index)) {
        case SetRole::SrripDedicated: return RripInsertFlavor::Srrip;
        case SetRole::BrripDedicated: return RripInsertFlavor::Brrip;
        case SetRole::Follower:
            return psel_ < midpoint() ? RripInsertFlavor::Srrip : RripInsertFlavor::Brrip;
        }
        throw std::logic_error("unknown set role");
    }

    void on_dirty_eviction(uint32_t set_index) {
        switch (role(set_index)) {
        case SetRole::SrripDedicated: set_psel(psel_ + write_weight_); break;
        case SetRole::BrripDedicated: set_psel(psel_ - write_weight_); break;
        case SetRole::Follower: break;
        }
    }

private:
    int psel_bits_;
    int64_t write_weight_;
    uint32_t stride_ = 0;
    int64_t psel_ = 0;
};

class DrripwPolicy final : public SrripPolicy {
public:
    DrripwPolicy(const CacheConfig& c, uint64_t seed)
        : SrripPolicy(c, seed),
          duel_(c.num_sets, static_cast<uint32_t>(c.param("dueling_sets", 32)),
                static_cast<int>(c.param("psel_bits", 10)), c.param("write_weight", 10)) {}

    void on_eviction(uint32_t set_index, bool was_dirty) override {
        if (was_dirty) duel_.on_dirty_eviction(set_index);
    }

    const DuelState& duel() const { return duel_; }

protected:
    RripInsertFlavor insert_flavor(uint32_t set_index, AccessKind) override {
        return duel_.flavor_for_set(set_index);
    }

private:
    DuelState duel_;
};

/// Least-dirty-first on top of SRRIP: the victim search yields the usual
/// saturated candidate class, the tie-break prefers the fewest dirty
/// sub-blocks.
class LdfPolicy final : public ReplacementPolicy {
public:
    LdfPolicy(const CacheConfig& c, uint64_t seed)
        : params_(RripParams::from_config(c)), rng_(seed), line_size_(c.line_size_bytes),
          subblock_bytes_(static_cast<uint32_t>(c.param("subblock_bytes", 8))) {
        if (subblock_bytes_ == 0 || line_size_ % subblock_bytes_ != 0)
            throw std::invalid_argument("subblock_bytes must divide line_size_bytes");
        if (line_size_ / subblock_bytes_ > 64)
            throw std::invalid_argument("at most 64 sub-blocks per line supported");
    }

    void on_hit(CacheSet& set, uint32_t, uint32_t way, const Access& a) override {
        auto& m = std::get<LdfMeta>(set.line(way).meta);
        m.rrpv = rrip_promote(m.rrpv);
        if (a.kind == AccessKind::Write) mark_dirty(m, a.address);
    }

    uint32_t select_victim(CacheSet& set, uint32_t) override {
        const uint8_t max = params_.max_rrpv();
        rrip_victim_search(
            set, max, [&](uint32_t w) { return std::get<LdfMeta>(set.line(w).meta).rrpv; },
            [&](uint32_t w, uint8_t v) { std::get<LdfMeta>(set.line(w).meta).rrpv = v; });
        int best = -1;
        int best_count = 0;
        for (uint32_t w = 0; w < set.ways(); ++w) {
            const auto& m = std::get<LdfMeta>(set.line(w).meta);
            if (m.rrpv != max) continue;
            const int count = std::popcount(m.dirty_bitmap);
            if (best < 0 || count < best_count) {
                best = static_cast<int>(w);
                best_count = count;
            }
        }
        return static_cast<uint32_t>(best);
    }

    void on_insert(CacheSet& set, uint32_t, uint32_t way, const Access& a) override {
        LdfMeta m;
        m.rrpv = rrip_insert_value(RripInsertFlavor::Srrip, params_, rng_);
        if (a.kind == AccessKind::Write) mark_dirty(m, a.address);
        set.line(way).meta = m;
    }

    uint32_t subblock_bytes() const { return subblock_bytes_; }

private:
    void mark_dirty(LdfMeta& m, uint64_t address) const {
        const uint64_t offset = address % line_size_;
        m.dirty_bitmap |= uint64_t{1} << (offset / subblock_bytes_);
    }

    RripParams params_;
    Rng rng_;
    uint32_t line_size_;
    uint32_t subblock_bytes_;
};

}  // namespace macsim
