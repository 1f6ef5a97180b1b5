#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include <jumpga/operators.hpp>

#include "test_support.hpp"

using namespace jumpga;
using core::Genotype;

TEST_CASE("uniform crossover of identical parents reproduces them") {
    auto eng = rng::make_engine(3);
    const Genotype p = Genotype::from_string("1010");
    for (int t = 0; t < 200; ++t) CHECK(operators::uniform_crossover(p, p, eng) == p);
}

TEST_CASE("uniform crossover preserves agreement positions") {
    auto eng = rng::make_engine(4);
    const Genotype a = Genotype::from_string("101010");
    const Genotype b = Genotype::from_string("100110");  // agrees with a at positions 1,2,6
    for (int t = 0; t < 500; ++t) {
        const Genotype z = operators::uniform_crossover(a, b, eng);
        CHECK(z.bit(0) == true);
        CHECK(z.bit(1) == false);
        CHECK(z.bit(5) == false);
    }
}

TEST_CASE("uniform crossover takes each bit fairly from complementary parents") {
    constexpr int trials = 100000;
    auto eng = rng::make_engine(5);
    const Genotype a = Genotype::from_string("0000");
    const Genotype b = Genotype::from_string("1111");
    std::array<int, 4> one_counts{};
    for (int t = 0; t < trials; ++t) {
        const Genotype z = operators::uniform_crossover(a, b, eng);
        for (int i = 0; i < 4; ++i)
            if (z.bit(i)) ++one_counts[i];
    }
    for (int i = 0; i < 4; ++i) {
        const double freq = static_cast<double>(one_counts[i]) / trials;
        CHECK(std::abs(freq - 0.5) <= testing::three_sigma(0.5, trials));
    }
}

TEST_CASE("crossover offspring never disagrees with both parents") {
    auto eng = rng::make_engine(6);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng::uniform_index(eng, 100);
        const Genotype a = core::random_genotype(n, eng);
        const Genotype b = core::random_genotype(n, eng);
        const Genotype z = operators::uniform_crossover(a, b, eng);
        for (std::size_t i = 0; i < n; ++i) CHECK((z.bit(i) == a.bit(i) || z.bit(i) == b.bit(i)));
    }
}

TEST_CASE("mutation with n=1 always flips") {
    auto eng = rng::make_engine(7);
    const Genotype zero = Genotype::from_string("0");
    for (int t = 0; t < 100; ++t)
        CHECK(operators::standard_bit_mutation(zero, eng) == Genotype::from_string("1"));
}

TEST_CASE("mutation flips one bit in expectation") {
    constexpr int trials = 100000;
    auto eng = rng::make_engine(8);
    for (std::size_t n : {2, 8, 64, 150}) {
        const Genotype x = Genotype::zeros(n);
        long long total_flips = 0;
        for (int t = 0; t < trials; ++t)
            total_flips += operators::standard_bit_mutation(x, eng).ones_count();
        const double mean = static_cast<double>(total_flips) / trials;
        INFO("n = " << n);
        CHECK(std::abs(mean - 1.0) <= 0.03);
    }
}

TEST_CASE("mutation zero-flip probability matches (1-1/n)^n") {
    constexpr int trials = 100000;
    auto eng = rng::make_engine(9);
    const Genotype x = Genotype::zeros(2);
    int unchanged = 0;
    for (int t = 0; t < trials; ++t)
        if (operators::standard_bit_mutation(x, eng) == x) ++unchanged;
    const double freq = static_cast<double>(unchanged) / trials;
    CHECK(std::abs(freq - 0.25) <= testing::three_sigma(0.25, trials));
}

TEST_CASE("mutation flip counts follow Binomial(n, 1/n): chi-square at n=8") {
    constexpr int trials = 100000;
    constexpr int n = 8;
    auto eng = rng::make_engine(10);
    const Genotype x = Genotype::zeros(n);
    std::array<long long, n + 1> observed{};
    for (int t = 0; t < trials; ++t) ++observed[operators::standard_bit_mutation(x, eng).ones_count()];

    std::array<double, n + 1> expected{};
    const double p = 1.0 / n;
    for (int j = 0; j <= n; ++j) {
        double c = 1.0;
        for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
        expected[j] = trials * c * std::pow(p, j) * std::pow(1.0 - p, n - j);
    }

    // merge the sparse tail so each bin expects at least 5
    std::vector<double> exp_bins;
    std::vector<double> obs_bins;
    double exp_tail = 0.0, obs_tail = 0.0;
    for (int j = 0; j <= n; ++j) {
        if (expected[j] >= 5.0 && exp_tail == 0.0) {
            exp_bins.push_back(expected[j]);
            obs_bins.push_back(static_cast<double>(observed[j]));
        } else {
            exp_tail += expected[j];
            obs_tail += static_cast<double>(observed[j]);
        }
    }
    exp_bins.push_back(exp_tail);
    obs_bins.push_back(obs_tail);

    double chi2 = 0.0;
    for (std::size_t b = 0; b < exp_bins.size(); ++b) {
        const double diff = obs_bins[b] - exp_bins[b];
        chi2 += diff * diff / exp_bins[b];
    }
    // upper 10^-3 quantiles of chi-square, dof 1..10
    const std::array<double, 10> critical = {10.828, 13.816, 16.266, 18.467, 20.515,
                                             22.458, 24.322, 26.124, 27.877, 29.588};
    const std::size_t dof = exp_bins.size() - 1;
    REQUIRE(dof >= 1);
    REQUIRE(dof <= critical.size());
    CHECK(chi2 < critical[dof - 1]);
}

TEST_CASE("elitist replacement: strict rejection, tie acceptance, fair tie-break") {
    auto make_pop = [] {
        core::Population pop;
        pop.members = {Genotype::zeros(4), Genotype::zeros(4), Genotype::zeros(4)};
        pop.fitness = {5, 5, 7};
        return pop;
    };
    auto eng = rng::make_engine(11);

    SUBCASE("better offspring replaces one of the worst slots uniformly") {
        constexpr int trials = 100000;
        std::array<int, 3> victim_counts{};
        for (int t = 0; t < trials; ++t) {
            auto pop = make_pop();
            const auto out = operators::elitist_replace(pop, Genotype::all_ones(4), 6, eng);
            REQUIRE(out.accepted);
            ++victim_counts[out.victim_slot];
            CHECK(pop.fitness[out.victim_slot] == 6);
            CHECK(pop.size() == 3);
        }
        CHECK(victim_counts[2] == 0);
        for (int slot : {0, 1}) {
            const double freq = static_cast<double>(victim_counts[slot]) / trials;
            CHECK(std::abs(freq - 0.5) <= testing::three_sigma(0.5, trials));
        }
    }

    SUBCASE("worse offspring is rejected") {
        auto pop = make_pop();
        const auto out = operators::elitist_replace(pop, Genotype::all_ones(4), 4, eng);
        CHECK_FALSE(out.accepted);
        CHECK(pop.fitness == std::vector<int>{5, 5, 7});
        CHECK(pop.members[out.victim_slot] == Genotype::zeros(4));
    }

    SUBCASE("equal offspring is accepted in place of a worst slot") {
        auto pop = make_pop();
        const auto out = operators::elitist_replace(pop, Genotype::all_ones(4), 5, eng);
        CHECK(out.accepted);
        CHECK(out.victim_fitness == 5);
        CHECK((out.victim_slot == 0 || out.victim_slot == 1));
        CHECK(pop.members[out.victim_slot] == Genotype::all_ones(4));
    }
}

TEST_CASE("replacement keeps size and never lowers min or max fitness") {
    auto eng = rng::make_engine(12);
    core::Population pop;
    const core::FitnessSpec spec{10, 2};
    for (int i = 0; i < 6; ++i) {
        pop.members.push_back(core::random_genotype(10, eng));
        pop.fitness.push_back(core::jump_fitness(pop.members.back(), spec));
    }
    for (int t = 0; t < 2000; ++t) {
        const int old_min = *std::min_element(pop.fitness.begin(), pop.fitness.end());
        const int old_max = *std::max_element(pop.fitness.begin(), pop.fitness.end());
        const Genotype y = core::random_genotype(10, eng);
        operators::elitist_replace(pop, y, core::jump_fitness(y, spec), eng);
        CHECK(pop.size() == 6);
        CHECK(*std::min_element(pop.fitness.begin(), pop.fitness.end()) >= old_min);
        CHECK(*std::max_element(pop.fitness.begin(), pop.fitness.end()) >= old_max);
    }
}
