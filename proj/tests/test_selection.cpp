#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <jumpga/selection.hpp>

#include "test_support.hpp"

using namespace jumpga;
using core::Genotype;
using selection::PairSelector;

namespace {

core::Population population_of(std::vector<std::string> rows) {
    core::Population pop;
    for (const auto& r : rows) pop.members.push_back(Genotype::from_string(r));
    pop.fitness.assign(pop.members.size(), 0);
    return pop;
}

// mu=4 with the unique max pair (0, 3) at distance 4
core::Population unique_max_pair_population() {
    return population_of({"0000", "1000", "0001", "1111"});
}

double measured_max_pair_frequency(const core::Population& pop, const PairSelector& sel,
                                   int trials, rng::Engine& eng) {
    const diversity::DistanceMatrix matrix(pop.members);
    const int d = matrix.max_distance();
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        const auto [i, j] = selection::select_crossover_parents(pop, matrix, sel, eng);
        if (matrix.at(i, j) == d) ++hits;
    }
    return static_cast<double>(hits) / trials;
}

} // namespace

TEST_CASE("furthest selector returns the unique max pair deterministically") {
    const auto pop = unique_max_pair_population();
    const diversity::DistanceMatrix matrix(pop.members);
    auto eng = rng::make_engine(1);
    for (int t = 0; t < 300; ++t) {
        const auto [i, j] = selection::select_crossover_parents(pop, matrix,
                                                                PairSelector::furthest(), eng);
        CHECK(i == 0);
        CHECK(j == 3);
    }
    CHECK(selection::max_distance_pair_probability(matrix, PairSelector::furthest()) == 1.0);
}

TEST_CASE("uniform pair selection hits the unique max pair with probability 1/6") {
    const auto pop = unique_max_pair_population();
    constexpr int trials = 100000;
    auto eng = rng::make_engine(2);
    const double freq =
        measured_max_pair_frequency(pop, PairSelector::uniform_pair(), trials, eng);
    CHECK(std::abs(freq - 1.0 / 6.0) <= testing::three_sigma(1.0 / 6.0, trials));
    const diversity::DistanceMatrix matrix(pop.members);
    CHECK(selection::max_distance_pair_probability(matrix, PairSelector::uniform_pair()) ==
          doctest::Approx(1.0 / 6.0));
}

TEST_CASE("degenerate all-identical population: furthest is uniform over all pairs") {
    const auto pop = population_of({"0101", "0101", "0101", "0101"});
    const diversity::DistanceMatrix matrix(pop.members);
    CHECK(matrix.max_distance() == 0);
    constexpr int trials = 60000;
    auto eng = rng::make_engine(3);
    std::map<std::pair<std::size_t, std::size_t>, int> counts;
    for (int t = 0; t < trials; ++t)
        ++counts[selection::select_crossover_parents(pop, matrix, PairSelector::furthest(), eng)];
    CHECK(counts.size() == 6);
    for (const auto& [pair, count] : counts) {
        CHECK(pair.first < pair.second);
        const double freq = static_cast<double>(count) / trials;
        CHECK(std::abs(freq - 1.0 / 6.0) <= testing::three_sigma(1.0 / 6.0, trials));
    }
}

TEST_CASE("tournament: closed form 1-(5/6)^l, monotone in l, matches Monte Carlo") {
    const auto pop = unique_max_pair_population();
    const diversity::DistanceMatrix matrix(pop.members);
    double previous = 0.0;
    for (int l : {1, 2, 3, 5, 8}) {
        const double exact =
            selection::max_distance_pair_probability(matrix, PairSelector::tournament(l));
        CHECK(exact == doctest::Approx(1.0 - std::pow(5.0 / 6.0, l)));
        CHECK(exact >= previous);
        previous = exact;
    }
    constexpr int trials = 100000;
    auto eng = rng::make_engine(4);
    const double freq = measured_max_pair_frequency(pop, PairSelector::tournament(3), trials, eng);
    const double exact = 1.0 - std::pow(5.0 / 6.0, 3);
    CHECK(std::abs(freq - exact) <= testing::three_sigma(exact, trials));
}

TEST_CASE("power-law selection frequency matches its exact probability") {
    const auto pop = unique_max_pair_population();
    const diversity::DistanceMatrix matrix(pop.members);
    const double exact =
        selection::max_distance_pair_probability(matrix, PairSelector::power_law(2.0));
    CHECK(exact > 0.0);
    CHECK(exact <= 1.0);
    constexpr int trials = 100000;
    auto eng = rng::make_engine(5);
    const double freq = measured_max_pair_frequency(pop, PairSelector::power_law(2.0), trials, eng);
    CHECK(std::abs(freq - exact) <= testing::three_sigma(exact, trials));
}

TEST_CASE("selection frequency matches the exact probability on random populations") {
    constexpr int trials = 100000;
    auto eng = rng::make_engine(6);
    const std::vector<PairSelector> selectors = {
        PairSelector::uniform_pair(), PairSelector::furthest(), PairSelector::tournament(4),
        PairSelector::power_law(2.5)};
    for (int round = 0; round < 3; ++round) {
        const std::size_t mu = 3 + rng::uniform_index(eng, 6);  // <= 8
        core::Population pop;
        pop.members = testing::random_population(mu, 6, eng);
        pop.fitness.assign(mu, 0);
        const diversity::DistanceMatrix matrix(pop.members);
        for (const auto& sel : selectors) {
            const double exact = selection::max_distance_pair_probability(matrix, sel);
            const double freq = measured_max_pair_frequency(pop, sel, trials, eng);
            INFO("selector " << selection::to_string(sel) << " round " << round);
            CHECK(std::abs(freq - exact) <= testing::three_sigma(exact, trials) + 1e-9);
        }
    }
}

TEST_CASE("selectors never return the same slot twice") {
    auto eng = rng::make_engine(7);
    const std::vector<PairSelector> selectors = {
        PairSelector::uniform_pair(), PairSelector::furthest(), PairSelector::tournament(2),
        PairSelector::power_law(3.0)};
    for (int round = 0; round < 40; ++round) {
        core::Population pop;
        const std::size_t mu = 2 + rng::uniform_index(eng, 7);
        if (round % 2 == 0) {
            pop.members = testing::random_population(mu, 5, eng);
        } else {
            pop.members.assign(mu, Genotype::from_string("10101"));  // degenerate d = 0
        }
        pop.fitness.assign(mu, 0);
        const diversity::DistanceMatrix matrix(pop.members);
        for (const auto& sel : selectors)
            for (int t = 0; t < 50; ++t) {
                const auto [i, j] = selection::select_crossover_parents(pop, matrix, sel, eng);
                CHECK(i != j);
                CHECK(i < mu);
                CHECK(j < mu);
            }
    }
}

TEST_CASE("mutation parent selection is uniform") {
    core::Population pop;
    pop.members.assign(4, Genotype::zeros(3));
    pop.fitness.assign(4, 0);
    constexpr int trials = 100000;
    auto eng = rng::make_engine(8);
    std::array<int, 4> counts{};
    for (int t = 0; t < trials; ++t)
        ++counts[selection::select_mutation_parent(pop, {}, eng)];
    for (int c : counts) {
        const double freq = static_cast<double>(c) / trials;
        CHECK(std::abs(freq - 0.25) <= testing::three_sigma(0.25, trials));
    }

    core::Population single;
    single.members.assign(1, Genotype::zeros(3));
    single.fitness.assign(1, 0);
    for (int t = 0; t < 20; ++t) CHECK(selection::select_mutation_parent(single, {}, eng) == 0);

    auto eng_a = rng::make_engine(42), eng_b = rng::make_engine(42);
    for (int t = 0; t < 100; ++t)
        CHECK(selection::select_mutation_parent(pop, {}, eng_a) ==
              selection::select_mutation_parent(pop, {}, eng_b));
}

TEST_CASE("contracts: population too small, oversized tournament enumeration") {
    core::Population one;
    one.members.assign(1, Genotype::zeros(2));
    one.fitness.assign(1, 0);
    const diversity::DistanceMatrix matrix(one.members);
    auto eng = rng::make_engine(9);
    CHECK_THROWS_AS(
        selection::select_crossover_parents(one, matrix, PairSelector::furthest(), eng),
        std::invalid_argument);
    CHECK_THROWS_AS(selection::max_distance_pair_probability(matrix, PairSelector::furthest()),
                    std::invalid_argument);

    core::Population big;
    big.members.assign(65, Genotype::zeros(2));
    big.fitness.assign(65, 0);
    const diversity::DistanceMatrix big_matrix(big.members);
    CHECK_THROWS_AS(
        selection::max_distance_pair_probability(big_matrix, PairSelector::tournament(2)),
        std::domain_error);
    CHECK(selection::max_distance_pair_probability(big_matrix, PairSelector::uniform_pair()) > 0.0);
}

TEST_CASE("pair selection replays identically under a fixed seed") {
    auto seed_eng = rng::make_engine(17);
    core::Population pop;
    pop.members = testing::random_population(6, 12, seed_eng);
    pop.fitness.assign(6, 0);
    const diversity::DistanceMatrix matrix(pop.members);
    for (const auto& sel :
         {PairSelector::uniform_pair(), PairSelector::furthest(), PairSelector::tournament(3),
          PairSelector::power_law(2.0)}) {
        auto eng_a = rng::make_engine(1234);
        auto eng_b = rng::make_engine(1234);
        for (int t = 0; t < 200; ++t)
            CHECK(selection::select_crossover_parents(pop, matrix, sel, eng_a) ==
                  selection::select_crossover_parents(pop, matrix, sel, eng_b));
    }
}

TEST_CASE("selector text forms round trip") {
    for (const auto& text : {"uniform-pair", "furthest", "tournament:7", "powerlaw:2.5"})
        CHECK(selection::to_string(selection::parse_pair_selector(text)) == text);
    CHECK_THROWS_AS(selection::parse_pair_selector("best"), std::invalid_argument);
    CHECK_THROWS_AS(selection::parse_pair_selector("tournament:0"), std::invalid_argument);
    CHECK_THROWS_AS(selection::parse_pair_selector("powerlaw:1.0"), std::invalid_argument);
    CHECK_THROWS_AS(PairSelector::tournament(0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(PairSelector::power_law(0.5).validate(), std::invalid_argument);
}
