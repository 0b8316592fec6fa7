#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace evopinn {

// Splittable seeding: every stochastic subsystem derives its own engine from
// (master_seed, stream tag) so runs are reproducible and subsystems stay
// independent of each other's draw counts.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_tag(std::string_view tag) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
    return splitmix64(master ^ splitmix64(hash_tag(tag)));
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::string_view tag) {
    return std::mt19937_64(derive_seed(master, tag));
}

}  // namespace evopinn
