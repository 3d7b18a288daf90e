#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace macsim {

enum class AccessKind : uint8_t { Read, Write };

/// One trace record. Read covers load/store requests reaching the LLC,
/// Write is a write-back arriving from an upper level.
struct Access {
    AccessKind kind = AccessKind::Read;
    uint64_t address = 0;

    friend bool operator==(const Access&, const Access&) = default;
};

enum class PolicyId : uint8_t { LRU, SRRIP, BRRIP, DRRIPW, LDF, RWA, MAC };

inline std::string to_string(PolicyId p) {
    switch (p) {
    case PolicyId::LRU: return "LRU";
    case PolicyId::SRRIP: return "SRRIP";
    case PolicyId::BRRIP: return "BRRIP";
    case PolicyId::DRRIPW: return "DRRIPW";
    case PolicyId::LDF: return "LDF";
    case PolicyId::RWA: return "RWA";
    case PolicyId::MAC: return "MAC";
    }
    throw std::logic_error("unknown PolicyId");
}

inline std::optional<PolicyId> parse_policy_id(const std::string& s) {
    for (PolicyId p : {PolicyId::LRU, PolicyId::SRRIP, PolicyId::BRRIP, PolicyId::DRRIPW,
                       PolicyId::LDF, PolicyId::RWA, PolicyId::MAC}) {
        if (s == to_string(p)) return p;
    }
    return std::nullopt;
}

/// Integer knobs consumed by individual policies. Unknown keys are rejected
/// at cache construction.
using PolicyParams = std::map<std::string, int64_t>;

struct CacheConfig {
    uint32_t num_sets = 512;
    uint32_t num_ways = 16;
    uint32_t line_size_bytes = 64;
    PolicyId policy_id = PolicyId::LRU;
    PolicyParams policy_params;
    bool flush_at_end = false;

    void validate() const {
        auto pow2 = [](uint64_t v) { return v > 0 && (v & (v - 1)) == 0; };
        if (!pow2(num_sets)) throw std::invalid_argument("num_sets must be a positive power of two");
        if (!pow2(num_ways)) throw std::invalid_argument("num_ways must be a positive power of two");
        if (!pow2(line_size_bytes))
            throw std::invalid_argument("line_size_bytes must be a positive power of two");
    }

    int64_t param(const std::string& key, int64_t fallback) const {
        auto it = policy_params.find(key);
        return it == policy_params.end() ? fallback : it->second;
    }
};

struct MacMeta {
    uint8_t fdl = 4;  // 1..4
    friend bool operator==(const MacMeta&, const MacMeta&) = default;
};

struct RripMeta {
    uint8_t rrpv = 0;
    friend bool operator==(const RripMeta&, const RripMeta&) = default;
};

struct LdfMeta {
    uint8_t rrpv = 0;
    uint64_t dirty_bitmap = 0;  // one bit per sub-block, at most 64 sub-blocks
    friend bool operator==(const LdfMeta&, const LdfMeta&) = default;
};

using PolicyMeta = std::variant<std::monostate, MacMeta, RripMeta, LdfMeta>;

struct LineState {
    uint64_t tag = 0;
    bool valid = false;
    bool dirty = false;
    uint32_t recency = 0;  // 0 = MRU; ranks form a permutation over valid lines
    PolicyMeta meta;
};

struct EvictionEvent {
    uint32_t set_index = 0;
    uint32_t way = 0;
    bool was_dirty = false;
    uint64_t evicted_tag = 0;

    friend bool operator==(const EvictionEvent&, const EvictionEvent&) = default;
};

struct Metrics {
    uint64_t accesses = 0;
    uint64_t hits = 0;
    uint64_t misses = 0;
    uint64_t pcm_reads = 0;   // miss fills
    uint64_t pcm_writes = 0;  // dirty evictions during the run
    uint64_t flush_writes = 0;  // dirty lines drained at end of run

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct CostModel {
    int64_t hit_cycles = 15;
    int64_t read_latency_cycles = 1024;
    int64_t write_latency_cycles = 4096;

    void validate() const {
        if (hit_cycles <= 0 || read_latency_cycles <= 0 || write_latency_cycles <= 0)
            throw std::invalid_argument("cost model cycles must be positive");
    }
};

}  // namespace macsim
