#pragma once

#include <cstdint>

namespace xtel {

/// splitmix64 generator. Small state, passes BigCrush, and cheap enough to
/// reseed per stream.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

/// Stateless mix of (seed, stream, index). Every draw is addressable, so a
/// sample stream is identical no matter how evaluation is split across
/// workers.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t index) {
    SplitMix64 g(seed ^ (stream * 0xD6E8FEB86659FD93ull) ^
                 (index * 0xA5A5A5A5A5A5A5A5ull));
    g.next();
    return g.next();
}

/// Uniform double in [0, 1) from the stateless mix.
inline double mix_double(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t index) {
    return static_cast<double>(mix64(seed, stream, index) >> 11) * 0x1.0p-53;
}

} // namespace xtel
