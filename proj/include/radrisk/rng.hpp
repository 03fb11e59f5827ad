#pragma once

#include <cstdint>
#include <random>

namespace radrisk {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent generator for one replicate of a Monte Carlo run. Replicate i
// always sees the same stream for a given master seed, no matter how the
// replicates are partitioned across worker threads.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
    const std::uint64_t w0 = splitmix64(s);
    const std::uint64_t w1 = splitmix64(s);
    const std::uint64_t w2 = splitmix64(s);
    const std::uint64_t w3 = splitmix64(s);
    std::seed_seq seq{
        static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w0 >> 32),
        static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w1 >> 32),
        static_cast<std::uint32_t>(w2), static_cast<std::uint32_t>(w2 >> 32),
        static_cast<std::uint32_t>(w3), static_cast<std::uint32_t>(w3 >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace radrisk
