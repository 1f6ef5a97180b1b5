#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <jumpga/bitstring.hpp>
#include <jumpga/rng.hpp>

namespace jumpga::core {

/// Parameters of the Jump_k benchmark: dimension n and jump width k.
///
/// Fitness of x is |x|_1 + k when |x|_1 = n or |x|_1 <= n-k, and n - |x|_1
/// otherwise. The second-best fitness band (the plateau) is the set of points
/// with exactly n-k ones; the unique optimum is the all-ones string with
/// fitness n+k. k = 1 is accepted as the degenerate case with an empty valley.
struct FitnessSpec {
    int n = 0;
    int k = 0;

    void validate() const {
        if (n < 1) throw std::invalid_argument("FitnessSpec: n must be >= 1");
        if (k < 1 || k > n) throw std::invalid_argument("FitnessSpec: k must satisfy 1 <= k <= n");
    }

    /// The main analysis applies for k <= n/3; callers warn outside it.
    bool in_supported_regime() const { return 3 * k <= n; }

    int plateau_ones() const { return n - k; }
    int optimum_fitness() const { return n + k; }

    friend bool operator==(const FitnessSpec&, const FitnessSpec&) = default;
};

inline int jump_fitness(const Genotype& x, const FitnessSpec& spec) {
    if (x.length() != static_cast<std::size_t>(spec.n))
        throw std::invalid_argument("jump_fitness: genotype length does not match spec");
    const int ones = x.ones_count();
    if (ones == spec.n || ones <= spec.n - spec.k) return ones + spec.k;
    return spec.n - ones;
}

inline bool on_plateau(const Genotype& x, const FitnessSpec& spec) {
    if (x.length() != static_cast<std::size_t>(spec.n))
        throw std::invalid_argument("on_plateau: genotype length does not match spec");
    return x.ones_count() == spec.plateau_ones();
}

inline bool is_optimum(const Genotype& x, const FitnessSpec& spec) {
    return x.ones_count() == spec.n;
}

/// Plateau and optimum membership read off a cached fitness value: on Jump_k
/// the plateau is exactly the fitness-n band and the optimum fitness is n+k.
inline bool fitness_on_plateau(int fitness, const FitnessSpec& spec) { return fitness == spec.n; }
inline bool fitness_is_plateau_or_optimum(int fitness, const FitnessSpec& spec) {
    return fitness == spec.n || fitness == spec.optimum_fitness();
}

/// Uniform sample over the plateau: exactly n-k ones. Chooses the k zero
/// positions as a uniform k-subset (Floyd's algorithm), so the draw count is
/// exactly k.
inline Genotype random_plateau_genotype(const FitnessSpec& spec, rng::Engine& eng) {
    spec.validate();
    const std::size_t n = static_cast<std::size_t>(spec.n);
    const std::size_t k = static_cast<std::size_t>(spec.k);
    std::vector<std::uint8_t> zero_at(n, 0);
    for (std::size_t j = n - k; j < n; ++j) {
        const std::size_t t = rng::uniform_index(eng, j + 1);
        if (zero_at[t])
            zero_at[j] = 1;
        else
            zero_at[t] = 1;
    }
    std::vector<std::uint64_t> words(Genotype::word_count(n), 0);
    for (std::size_t i = 0; i < n; ++i)
        if (!zero_at[i]) words[i / 64] |= 1ULL << (i % 64);
    return Genotype::from_words(std::move(words), n);
}

} // namespace jumpga::core
