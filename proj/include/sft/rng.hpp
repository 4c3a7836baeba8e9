#pragma once

#include <cstdint>
#include <string>

namespace sft {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// Seed of the per-trial random stream. The contract is that the same
// (seed, trial_index) pair always yields the identical stream, so any
// sample can be regenerated without replaying earlier trials.
inline std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial_index) {
    return mix64(seed + kGoldenGamma * (trial_index + 1));
}

struct SplitMix64 {
    std::uint64_t state = 0;

    SplitMix64() = default;
    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        state += kGoldenGamma;
        return mix64(state);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

// FNV-1a; used for stable cell ids in the experiment harness.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace sft
