#pragma once

#include <cstdint>
#include <random>

namespace jumpga::rng {

/// Every run owns exactly one engine; all stochastic decisions of a run are
/// drawn from it in a fixed order (see engine.cpp for the order).
using Engine = std::mt19937_64;

/// SplitMix64 finalizer, used only for seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of derived stream `index` under a base seed. Replicate i of a batch
/// uses derive_seed(config_seed, i); sweep cell c uses derive_seed(sweep_seed, c)
/// as its config seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

inline Engine make_engine(std::uint64_t seed) {
    return Engine{seed};
}

/// Uniform double in [0, 1), 53 significant bits.
inline double uniform_double(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, bound), bound >= 1 (Lemire rejection).
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t bound) {
    std::uint64_t x = eng();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = eng();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

inline bool bernoulli(Engine& eng, double p) {
    return uniform_double(eng) < p;
}

} // namespace jumpga::rng
