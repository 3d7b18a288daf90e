#pragma once

#include "macsim/policy.hpp"

namespace macsim {

/// Plain least-recently-used: the engine's recency chain already does all
/// the work, the policy just names the end of the chain.
class LruPolicy final : public ReplacementPolicy {
public:
    void on_hit(CacheSet&, uint32_t, uint32_t, const Access&) override {}

    uint32_t select_victim(CacheSet& set, uint32_t) override {
        if (!set.full()) throw std::logic_error("select_victim on a non-full set");
        return set.global_lru_way();
    }

    void on_insert(CacheSet&, uint32_t, uint32_t, const Access&) override {}
};

}  // namespace macsim
