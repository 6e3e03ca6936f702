#pragma once

#include <cstdint>
#include <random>

// Seeded RNG helpers shared by propagation, sampling and the generators.
// All draws go through these so that a fixed seed reproduces bit-identical
// results across platforms: mt19937_64 with seed_seq construction is fully
// specified by the standard, and the uniform helpers avoid the
// implementation-defined std distributions.

namespace infoflow::rng {

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32)};
    return Engine(seq);
}

/// Independent stream for (seed, worker, iteration); workers re-derive their
/// stream every iteration so a run is replayable for a fixed worker count.
inline Engine make_stream(std::uint64_t seed, std::uint64_t worker, std::uint64_t iteration) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(worker),
                      static_cast<std::uint32_t>(iteration),
                      static_cast<std::uint32_t>(iteration >> 32)};
    return Engine(seq);
}

/// Uniform double in [0,1) with 53 random bits.
inline double uniform_double(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0,n). Rejection keeps the draw unbiased.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
    std::uint64_t x = eng();
    while (x < threshold) x = eng();
    return x % n;
}

} // namespace infoflow::rng
