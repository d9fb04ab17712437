#pragma once

#include <cstdint>
#include <string_view>

namespace signid::rng {

/// SplitMix64 finalizer; the mixing core of the counter-based streams.
constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a over a byte string; used to fold graph identities into stream keys.
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministic stream keyed by (seed, label, index): the same key always
/// reproduces the same draw sequence, independent of any other stream.
/// Implementation is SplitMix64 over a mixed key, so streams for distinct
/// (seed, label, index) triples are decorrelated.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t label, std::uint64_t index)
        : state_(mix(mix(seed) ^ mix(label ^ 0x517cc1b727220a95ULL) ^
                     mix(index ^ 0x2545f4914f6cdd1dULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 bits of precision; bit-exact across
    /// platforms (no std::uniform_real_distribution).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

private:
    std::uint64_t state_;
};

}  // namespace signid::rng
