#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "macsim/policies/factory.hpp"
#include "macsim/policy.hpp"
#include "macsim/set.hpp"
#include "macsim/types.hpp"

namespace macsim {

struct AddressParts {
    uint32_t set_index = 0;
    uint64_t tag = 0;
};

inline AddressParts decompose_address(uint64_t address, const CacheConfig& config) {
    const uint64_t line = address / config.line_size_bytes;
    return {static_cast<uint32_t>(line % config.num_sets), line / config.num_sets};
}

struct AccessOutcome {
    bool hit = false;
    std::optional<EvictionEvent> eviction;
};

/// Policy-agnostic set-associative cache engine: write-allocate on write
/// miss, write-back on eviction. Dirty evictions during the run are the
/// memory writes; dirty lines drained by flush() are counted separately.
class Cache {
public:
    /// Invoked just after victim selection with the set state as it was at
    /// selection time (before the policy's demotions) and the chosen way.
    using EvictionObserver =
        std::function<void(uint32_t set_index, uint32_t victim_way,
                           const std::vector<LineState>& pre_selection_lines)>;

    explicit Cache(CacheConfig config, uint64_t seed = 0)
        : config_(std::move(config)), policy_(make_policy(config_, seed)) {
        config_.validate();
        sets_.reserve(config_.num_sets);
        for (uint32_t i = 0; i < config_.num_sets; ++i) sets_.emplace_back(config_.num_ways);
    }

    /// Constructor for tests that need a hand-built policy instance.
    Cache(CacheConfig config, std::unique_ptr<ReplacementPolicy> policy)
        : config_(std::move(config)), policy_(std::move(policy)) {
        config_.validate();
        sets_.reserve(config_.num_sets);
        for (uint32_t i = 0; i < config_.num_sets; ++i) sets_.emplace_back(config_.num_ways);
    }

    AccessOutcome access(const Access& a) {
        const auto [set_index, tag] = decompose_address(a.address, config_);
        CacheSet& set = sets_[set_index];
        metrics_.accesses++;

        if (int way = set.find(tag); way >= 0) {
            policy_->on_hit(set, set_index, static_cast<uint32_t>(way), a);
            set.make_mru(static_cast<uint32_t>(way));
            if (a.kind == AccessKind::Write) set.line(way).dirty = true;
            metrics_.hits++;
            return {true, std::nullopt};
        }

        std::optional<EvictionEvent> eviction;
        int way = set.find_free();
        if (way < 0) {
            std::vector<LineState> snapshot;
            if (observer_) snapshot.assign(set.lines().begin(), set.lines().end());
            const uint32_t victim = policy_->select_victim(set, set_index);
            if (observer_) observer_(set_index, victim, snapshot);
            const LineState& line = set.line(victim);
            eviction = EvictionEvent{set_index, victim, line.dirty, line.tag};
            if (line.dirty) metrics_.pcm_writes++;
            policy_->on_eviction(set_index, line.dirty);
            set.evict(victim);
            way = static_cast<int>(victim);
        }
        set.install(static_cast<uint32_t>(way), tag, a.kind == AccessKind::Write);
        policy_->on_insert(set, set_index, static_cast<uint32_t>(way), a);
        metrics_.misses++;
        metrics_.pcm_reads++;
        return {false, eviction};
    }

    /// Drains every valid line; dirty ones become flush_writes events.
    std::vector<EvictionEvent> flush() {
        std::vector<EvictionEvent> events;
        for (uint32_t s = 0; s < config_.num_sets; ++s) {
            for (uint32_t w = 0; w < config_.num_ways; ++w) {
                const LineState& line = sets_[s].line(w);
                if (!line.valid || !line.dirty) {
                    if (line.valid) sets_[s].evict(w);
                    continue;
                }
                events.push_back({s, w, true, line.tag});
                metrics_.flush_writes++;
                sets_[s].evict(w);
            }
        }
        return events;
    }

    const Metrics& metrics() const { return metrics_; }
    const CacheConfig& config() const { return config_; }
    const CacheSet& set(uint32_t index) const { return sets_.at(index); }
    ReplacementPolicy& policy() { return *policy_; }

    void set_eviction_observer(EvictionObserver obs) { observer_ = std::move(obs); }

private:
    CacheConfig config_;
    std::unique_ptr<ReplacementPolicy> policy_;
    std::vector<CacheSet> sets_;
    Metrics metrics_;
    EvictionObserver observer_;
};

inline int64_t stall_cycles(const Metrics& m, const CostModel& cost = {}) {
    return static_cast<int64_t>(m.hits) * cost.hit_cycles +
           static_cast<int64_t>(m.pcm_reads) * cost.read_latency_cycles +
           static_cast<int64_t>(m.pcm_writes) * cost.write_latency_cycles;
}

struct NormalizedReport {
    double writes = 1.0;      // pcm_writes ratio
    double hit_ratio = 1.0;   // (hits/accesses) ratio
    double stall_cycles = 1.0;
};

inline double hit_ratio(const Metrics& m) {
    return m.accesses == 0 ? 0.0 : static_cast<double>(m.hits) / static_cast<double>(m.accesses);
}

/// Ratios of a run's counters to the baseline run's. Throws when a baseline
/// divisor is zero, naming the counter.
inline NormalizedReport normalize(const Metrics& m, const Metrics& baseline,
                                  const CostModel& cost = {}) {
    auto require_nonzero = [](auto value, const char* name) {
        if (value == 0)
            throw std::domain_error(std::string("normalize: baseline ") + name + " is zero");
    };
    require_nonzero(baseline.pcm_writes, "pcm_writes");
    require_nonzero(baseline.accesses, "accesses");
    require_nonzero(baseline.hits, "hits");
    const int64_t baseline_stall = stall_cycles(baseline, cost);
    require_nonzero(baseline_stall, "stall_cycles");

    NormalizedReport r;
    r.writes = static_cast<double>(m.pcm_writes) / static_cast<double>(baseline.pcm_writes);
    r.hit_ratio = hit_ratio(m) / hit_ratio(baseline);
    r.stall_cycles =
        static_cast<double>(stall_cycles(m, cost)) / static_cast<double>(baseline_stall);
    return r;
}

}  // namespace macsim
