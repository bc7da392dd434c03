#pragma once

#include <cstdint>

namespace triarb::detail {

/// SplitMix64 (Steele/Lea/Vigna). The generator is pinned here, not taken
/// from <random>, so that seeds reproduce bit-for-bit across compilers and
/// builds; every seeded feature in the project draws from this stream.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound) by rejection, so no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = -bound % bound;
        for (;;) {
            std::uint64_t v = next();
            if (v >= threshold) return v % bound;
        }
    }

    /// Uniform integer coordinate in [-9, 9].
    int small_int() { return static_cast<int>(below(19)) - 9; }
};

/// Stable stream-splitting: a child seed for (seed, index) pairs.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 s(seed ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL));
    return s.next();
}

}  // namespace triarb::detail
