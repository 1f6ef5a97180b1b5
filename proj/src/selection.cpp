#include <jumpga/selection.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace jumpga::selection {

void PairSelector::validate() const {
    if (kind == Kind::DistanceTournament && tournament_size < 1)
        throw std::invalid_argument("PairSelector: tournament size must be >= 1");
    if (kind == Kind::DistancePowerLaw && !(power_law_beta > 1.0))
        throw std::invalid_argument("PairSelector: power-law exponent must be > 1");
}

std::string to_string(const PairSelector& sel) {
    switch (sel.kind) {
        case PairSelector::Kind::UniformPair: return "uniform-pair";
        case PairSelector::Kind::FurthestUniform: return "furthest";
        case PairSelector::Kind::DistanceTournament:
            return "tournament:" + std::to_string(sel.tournament_size);
        case PairSelector::Kind::DistancePowerLaw: {
            char buf[32];
            auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), sel.power_law_beta);
            return "powerlaw:" + std::string(buf, end);
        }
    }
    throw std::logic_error("to_string: unknown selector kind");
}

PairSelector parse_pair_selector(std::string_view text) {
    if (text == "uniform-pair") return PairSelector::uniform_pair();
    if (text == "furthest") return PairSelector::furthest();
    constexpr std::string_view tour = "tournament:";
    constexpr std::string_view plaw = "powerlaw:";
    if (text.substr(0, tour.size()) == tour) {
        const auto arg = text.substr(tour.size());
        int size = 0;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), size);
        if (ec != std::errc{} || ptr != arg.data() + arg.size() || size < 1)
            throw std::invalid_argument("selector: bad tournament size in '" + std::string(text) + "'");
        return PairSelector::tournament(size);
    }
    if (text.substr(0, plaw.size()) == plaw) {
        const auto arg = text.substr(plaw.size());
        double beta = 0.0;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), beta);
        if (ec != std::errc{} || ptr != arg.data() + arg.size() || !(beta > 1.0))
            throw std::invalid_argument("selector: bad power-law exponent in '" + std::string(text) + "'");
        return PairSelector::power_law(beta);
    }
    throw std::invalid_argument("selector: unknown variant '" + std::string(text) +
                                "' (expected uniform-pair | furthest | tournament:<l> | powerlaw:<beta>)");
}

namespace {

std::pair<std::size_t, std::size_t> ordered(std::size_t a, std::size_t b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

std::pair<std::size_t, std::size_t> draw_uniform_pair(std::size_t mu, rng::Engine& eng) {
    const std::size_t i = rng::uniform_index(eng, mu);
    std::size_t j = rng::uniform_index(eng, mu - 1);
    if (j >= i) ++j;
    return ordered(i, j);
}

std::pair<std::size_t, std::size_t> draw_furthest_pair(const diversity::DistanceMatrix& matrix,
                                                       rng::Engine& eng) {
    const std::size_t mu = matrix.size();
    const int d = matrix.max_distance();
    std::uint64_t total_ordered = 0;
    for (std::size_t i = 0; i < mu; ++i)
        if (matrix.row_max(i) == d) total_ordered += matrix.row_max_count(i);
    std::uint64_t pick = rng::uniform_index(eng, total_ordered);
    for (std::size_t i = 0; i < mu; ++i) {
        if (matrix.row_max(i) != d) continue;
        if (pick >= matrix.row_max_count(i)) {
            pick -= matrix.row_max_count(i);
            continue;
        }
        for (std::size_t j = 0; j < mu; ++j) {
            if (j == i || matrix.at(i, j) != d) continue;
            if (pick == 0) return ordered(i, j);
            --pick;
        }
    }
    throw std::logic_error("draw_furthest_pair: inconsistent distance bookkeeping");
}

// Deterministic ranking shared by the power-law draw and its exact
// probability: non-ascending distance, ties by (i, j).
std::vector<std::pair<std::size_t, std::size_t>> ranked_pairs(const diversity::DistanceMatrix& m) {
    const std::size_t mu = m.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(mu * (mu - 1) / 2);
    for (std::size_t i = 0; i < mu; ++i)
        for (std::size_t j = i + 1; j < mu; ++j) pairs.emplace_back(i, j);
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
        return m.at(a.first, a.second) > m.at(b.first, b.second);
    });
    return pairs;
}

} // namespace

std::pair<std::size_t, std::size_t> select_crossover_parents(const core::Population& pop,
                                                             const diversity::DistanceMatrix& matrix,
                                                             const PairSelector& sel,
                                                             rng::Engine& eng) {
    const std::size_t mu = pop.size();
    if (mu < 2) throw std::invalid_argument("select_crossover_parents: population size must be >= 2");
    sel.validate();
    switch (sel.kind) {
        case PairSelector::Kind::UniformPair:
            return draw_uniform_pair(mu, eng);
        case PairSelector::Kind::FurthestUniform:
            return draw_furthest_pair(matrix, eng);
        case PairSelector::Kind::DistanceTournament: {
            std::pair<std::size_t, std::size_t> winner{0, 0};
            int best = -1;
            std::uint64_t ties = 0;
            for (int round = 0; round < sel.tournament_size; ++round) {
                const auto cand = draw_uniform_pair(mu, eng);
                const int d = matrix.at(cand.first, cand.second);
                if (d > best) {
                    best = d;
                    winner = cand;
                    ties = 1;
                } else if (d == best) {
                    ++ties;
                    if (rng::uniform_index(eng, ties) == 0) winner = cand;
                }
            }
            return winner;
        }
        case PairSelector::Kind::DistancePowerLaw: {
            const auto pairs = ranked_pairs(matrix);
            double total = 0.0;
            for (std::size_t r = 1; r <= pairs.size(); ++r)
                total += std::pow(static_cast<double>(r), -sel.power_law_beta);
            const double target = rng::uniform_double(eng) * total;
            double cumulative = 0.0;
            for (std::size_t r = 1; r <= pairs.size(); ++r) {
                cumulative += std::pow(static_cast<double>(r), -sel.power_law_beta);
                if (cumulative >= target) return pairs[r - 1];
            }
            return pairs.back();
        }
    }
    throw std::logic_error("select_crossover_parents: unknown selector kind");
}

std::size_t select_mutation_parent(const core::Population& pop, const MutationSelector& sel,
                                   rng::Engine& eng) {
    if (pop.size() < 1) throw std::invalid_argument("select_mutation_parent: empty population");
    switch (sel.kind) {
        case MutationSelector::Kind::Uniform:
            return rng::uniform_index(eng, pop.size());
    }
    throw std::logic_error("select_mutation_parent: unknown selector kind");
}

double max_distance_pair_probability(const diversity::DistanceMatrix& matrix,
                                     const PairSelector& sel) {
    const std::size_t mu = matrix.size();
    if (mu < 2)
        throw std::invalid_argument("max_distance_pair_probability: population size must be >= 2");
    sel.validate();
    const double pair_total = static_cast<double>(mu) * static_cast<double>(mu - 1) / 2.0;
    const double max_pairs = static_cast<double>(matrix.max_pair_count());
    switch (sel.kind) {
        case PairSelector::Kind::FurthestUniform:
            return 1.0;
        case PairSelector::Kind::UniformPair:
            return max_pairs / pair_total;
        case PairSelector::Kind::DistanceTournament: {
            if (mu > 64)
                throw std::domain_error(
                    "max_distance_pair_probability: unsupported size (tournament needs mu <= 64)");
            // A max-distance pair wins any tournament it appears in, so the
            // selector fails exactly when all l samples miss that set.
            const double miss = 1.0 - max_pairs / pair_total;
            return 1.0 - std::pow(miss, sel.tournament_size);
        }
        case PairSelector::Kind::DistancePowerLaw: {
            // Max-distance pairs occupy the top ranks regardless of tie order.
            const auto n_pairs = static_cast<std::uint64_t>(pair_total);
            double top = 0.0, total = 0.0;
            for (std::uint64_t r = 1; r <= n_pairs; ++r) {
                const double w = std::pow(static_cast<double>(r), -sel.power_law_beta);
                total += w;
                if (r <= matrix.max_pair_count()) top += w;
            }
            return top / total;
        }
    }
    throw std::logic_error("max_distance_pair_probability: unknown selector kind");
}

} // namespace jumpga::selection
