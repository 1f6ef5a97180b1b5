#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include <jumpga/diversity.hpp>
#include <jumpga/population.hpp>
#include <jumpga/rng.hpp>

namespace jumpga::selection {

/// Crossover parent-selection distribution over slot pairs.
///
/// - UniformPair: uniform over all C(mu,2) slot pairs.
/// - FurthestUniform: uniform over the slot pairs at maximum distance d(P).
/// - DistanceTournament(l): l pairs sampled uniformly with replacement; a
///   pair of maximum distance among them wins, ties broken uniformly.
/// - DistancePowerLaw(beta): all pairs ranked by non-ascending distance
///   (ties ordered by slot indices), rank j chosen with probability
///   proportional to j^-beta.
struct PairSelector {
    enum class Kind { UniformPair, FurthestUniform, DistanceTournament, DistancePowerLaw };

    Kind kind = Kind::FurthestUniform;
    int tournament_size = 2;      // used by DistanceTournament, >= 1
    double power_law_beta = 2.0;  // used by DistancePowerLaw, > 1

    static PairSelector uniform_pair() { return {Kind::UniformPair, 2, 2.0}; }
    static PairSelector furthest() { return {Kind::FurthestUniform, 2, 2.0}; }
    static PairSelector tournament(int size) { return {Kind::DistanceTournament, size, 2.0}; }
    static PairSelector power_law(double beta) { return {Kind::DistancePowerLaw, 2, beta}; }

    void validate() const;

    friend bool operator==(const PairSelector&, const PairSelector&) = default;
};

/// Text form used in configs, CLI and tables:
/// uniform-pair | furthest | tournament:<l> | powerlaw:<beta>
std::string to_string(const PairSelector& sel);
PairSelector parse_pair_selector(std::string_view text);

/// Mutation parent-selection distribution (uniform over slots).
struct MutationSelector {
    enum class Kind { Uniform };
    Kind kind = Kind::Uniform;

    friend bool operator==(const MutationSelector&, const MutationSelector&) = default;
};

/// Returns an unordered pair (i < j) of distinct slots. Requires mu >= 2 and
/// a distance matrix consistent with the population.
std::pair<std::size_t, std::size_t> select_crossover_parents(const core::Population& pop,
                                                             const diversity::DistanceMatrix& matrix,
                                                             const PairSelector& sel,
                                                             rng::Engine& eng);

std::size_t select_mutation_parent(const core::Population& pop, const MutationSelector& sel,
                                   rng::Engine& eng);

/// Exact probability that the selector returns a pair at distance d(P) for
/// the population behind `matrix`. Closed forms throughout; the tournament
/// variant enumerates over the pair multiset and is limited to mu <= 64
/// (throws std::domain_error beyond).
double max_distance_pair_probability(const diversity::DistanceMatrix& matrix,
                                     const PairSelector& sel);

} // namespace jumpga::selection
