#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mcle::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-mode child seed: independent of how many other streams exist.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = root;
    std::uint64_t out = splitmix64(s);
    for (auto p : path) {
        s = out ^ (p * 0xD1B54A32D192ED03ULL);
        out = splitmix64(s);
    }
    return out;
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    return derive_seed(root, {stream});
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) {
    std::uint64_t s = seed;
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
    return Engine(seq);
}

}  // namespace mcle::rng
