#pragma once

#include <cstdint>
#include <memory>

#include "macsim/set.hpp"
#include "macsim/types.hpp"

namespace macsim {

/// Contract every replacement policy plugs into. The engine owns the line
/// state; policies read and write the policy_meta, and may reorder recency
/// through CacheSet::make_mru. Hooks are called in a fixed order:
/// hit:  on_hit, then engine promotes to MRU and sets the dirty bit;
/// miss: select_victim (full set only), on_eviction, engine install,
///       then on_insert.
class ReplacementPolicy {
public:
    virtual ~ReplacementPolicy() = default;

    virtual void on_hit(CacheSet& set, uint32_t set_index, uint32_t way, const Access& a) = 0;

    virtual uint32_t select_victim(CacheSet& set, uint32_t set_index) = 0;

    virtual void on_insert(CacheSet& set, uint32_t set_index, uint32_t way, const Access& a) = 0;

    /// Fired for every capacity eviction; dirty evictions are the PCM writes.
    virtual void on_eviction(uint32_t /*set_index*/, bool /*was_dirty*/) {}
};

}  // namespace macsim
