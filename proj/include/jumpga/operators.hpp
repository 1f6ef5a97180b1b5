#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include <jumpga/bitstring.hpp>
#include <jumpga/population.hpp>
#include <jumpga/rng.hpp>

namespace jumpga::operators {

/// Per-iteration telemetry: what was produced and how.
struct OffspringRecord {
    core::Genotype offspring;
    bool via_crossover = false;
    std::size_t parent_a = 0;
    std::optional<std::size_t> parent_b;  // set exactly when via_crossover
    int bits_flipped_by_mutation = 0;
};

/// Uniform crossover: each position takes the bit of either parent with
/// probability 1/2, independently. Positions where the parents agree are
/// copied unchanged. One engine draw per 64-bit word.
inline core::Genotype uniform_crossover(const core::Genotype& a, const core::Genotype& b,
                                        rng::Engine& eng) {
    if (a.length() != b.length())
        throw std::invalid_argument("uniform_crossover: parent lengths differ");
    const std::size_t n = a.length();
    auto wa = a.words();
    auto wb = b.words();
    std::vector<std::uint64_t> out(wa.size());
    for (std::size_t i = 0; i < wa.size(); ++i) {
        const std::uint64_t mask = eng();
        out[i] = (wa[i] & ~mask) | (wb[i] & mask);
    }
    if (n % 64 != 0 && !out.empty()) out.back() &= (1ULL << (n % 64)) - 1;
    return core::Genotype::from_words(std::move(out), n);
}

/// Standard bit mutation: each bit flips independently with probability 1/n.
/// Implemented with geometric gap sampling, so the expected draw count per
/// call is O(1 + flips) instead of n. For n = 1 the bit always flips and no
/// draw is consumed.
inline core::Genotype standard_bit_mutation(const core::Genotype& x, rng::Engine& eng) {
    const std::size_t n = x.length();
    if (n < 1) throw std::invalid_argument("standard_bit_mutation: empty genotype");
    std::vector<std::uint64_t> words(x.words().begin(), x.words().end());
    if (n == 1) {
        words[0] ^= 1ULL;
        return core::Genotype::from_words(std::move(words), n);
    }
    const double p = 1.0 / static_cast<double>(n);
    const double denom = std::log1p(-p);  // < 0
    std::size_t pos = 0;
    while (pos < n) {
        // gap to the next flipped position, P(gap = g) = (1-p)^g p
        const double u = rng::uniform_double(eng);
        const double gap = std::floor(std::log1p(-u) / denom);
        if (gap >= static_cast<double>(n - pos)) break;
        pos += static_cast<std::size_t>(gap);
        words[pos / 64] ^= 1ULL << (pos % 64);
        ++pos;
    }
    return core::Genotype::from_words(std::move(words), n);
}

struct ReplaceOutcome {
    bool accepted = false;
    std::size_t victim_slot = 0;  // the drawn minimum-fitness slot
    int victim_fitness = 0;       // its fitness before replacement
};

/// Steady-state elitist replacement: draws z uniformly among the slots of
/// minimum fitness, then inserts y in z's place iff fitness_y >= f(z). The
/// tie-break draw is consumed whether or not y is accepted, and even when the
/// minimum is unique.
inline ReplaceOutcome elitist_replace(core::Population& pop, core::Genotype y, int fitness_y,
                                      rng::Engine& eng) {
    const std::size_t mu = pop.size();
    if (mu == 0) throw std::invalid_argument("elitist_replace: empty population");
    int min_fitness = pop.fitness[0];
    std::size_t min_count = 1;
    for (std::size_t i = 1; i < mu; ++i) {
        if (pop.fitness[i] < min_fitness) {
            min_fitness = pop.fitness[i];
            min_count = 1;
        } else if (pop.fitness[i] == min_fitness) {
            ++min_count;
        }
    }
    std::uint64_t pick = rng::uniform_index(eng, min_count);
    std::size_t victim = 0;
    for (std::size_t i = 0; i < mu; ++i) {
        if (pop.fitness[i] == min_fitness) {
            if (pick == 0) {
                victim = i;
                break;
            }
            --pick;
        }
    }
    ReplaceOutcome out{false, victim, min_fitness};
    if (fitness_y >= min_fitness) {
        pop.members[victim] = std::move(y);
        pop.fitness[victim] = fitness_y;
        out.accepted = true;
    }
    return out;
}

} // namespace jumpga::operators
