#pragma once

#include <cstdint>
#include <random>

namespace macsim {

/// Seeded random stream with reproducible helper mappings. mt19937_64 raw
/// draws are identical everywhere; the mappings below avoid the
/// implementation-defined std distributions.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    uint64_t next_below(uint64_t bound) { return engine_() % bound; }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double probability) { return next_unit() < probability; }

    /// True once every `denominator` draws on average.
    bool one_in(uint64_t denominator) { return next_below(denominator) == 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace macsim
