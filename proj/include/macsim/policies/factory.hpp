#pragma once

#include <memory>

#include "macsim/policies/lru.hpp"
#include "macsim/policies/mac.hpp"
#include "macsim/policies/rrip.hpp"

namespace macsim {

inline std::unique_ptr<ReplacementPolicy> make_policy(const CacheConfig& config, uint64_t seed) {
    switch (config.policy_id) {
    case PolicyId::LRU: return std::make_unique<LruPolicy>();
    case PolicyId::SRRIP: return std::make_unique<SrripPolicy>(config, seed);
    case PolicyId::BRRIP: return std::make_unique<BrripPolicy>(config, seed);
    case PolicyId::DRRIPW: return std::make_unique<DrripwPolicy>(config, seed);
    case PolicyId::LDF: return std::make_unique<LdfPolicy>(config, seed);
    case PolicyId::RWA: return std::make_unique<RwaPolicy>(config, seed);
    case PolicyId::MAC: return std::make_unique<MacPolicy>();
    }
    throw std::logic_error("unknown PolicyId");
}

}  // namespace macsim
