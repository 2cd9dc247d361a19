#pragma once

#include <cstdint>
#include <random>

namespace permtest {

using RngEngine = std::mt19937_64;

// splitmix64 finalizer; used to decorrelate seeds derived from
// (master seed, counter) pairs.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Engine for one replication. Deriving engines by counter keeps simulation
// output independent of how replications are scheduled across threads.
inline RngEngine replication_engine(std::uint64_t master_seed, std::uint64_t replication) {
    return RngEngine(mix_seed(mix_seed(master_seed) ^ replication));
}

inline double uniform01(RngEngine& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Uniform integer in [0, bound), bound >= 1.
inline std::uint64_t uniform_index(RngEngine& rng, std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

} // namespace permtest
