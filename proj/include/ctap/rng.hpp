#pragma once

#include <cstdint>

namespace ctap {

// Counter-based splittable random numbers built on SplitMix64 (Steele,
// Lea & Vigna).  Every draw is a pure function of (seed, index), so
// Monte-Carlo loops can run in any order — or in parallel — and still
// produce identical streams.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent sub-stream key: use to give each trial/point its own seed.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x9E3779B97F4A7C15ULL));
}

// Uniform draw in [0, 1) for counter `index` of stream `seed`.
inline double uniform01(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(substream(seed, index) >> 11) * 0x1.0p-53;
}

// Uniform draw in (0, 2]: the paper's weight perturbation "chosen
// independently and uniformly chosen between 0 and 2".  The open end at 0
// keeps perturbed weights nonzero.
inline double uniform02(std::uint64_t seed, std::uint64_t index) {
    return 2.0 * (1.0 - uniform01(seed, index));
}

} // namespace ctap
