#include <jumpga/oracles.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace jumpga::oracles {

namespace {

McEstimate make_estimate(std::uint64_t hits, std::uint64_t trials) {
    McEstimate e;
    e.hits = hits;
    e.trials = trials;
    e.frequency = static_cast<double>(hits) / static_cast<double>(trials);
    e.half_width_3sigma = 3.0 * std::sqrt(e.frequency * (1.0 - e.frequency) /
                                          static_cast<double>(trials));
    return e;
}

/// One-sided check freq >= bound - 3*sigma, sigma taken at the bound.
ValidationRow lower_bound_row(std::string check, std::string detail, double bound, double freq,
                              std::uint64_t trials) {
    ValidationRow row;
    row.check = std::move(check);
    row.detail = std::move(detail);
    row.bound = bound;
    row.observed = freq;
    if (bound <= 0.0) {  // vacuous
        row.slack = 0.0;
        row.pass = true;
        return row;
    }
    row.slack = 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
    row.pass = freq >= bound - row.slack;
    return row;
}

} // namespace

void GamblerRuinParams::validate() const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("GamblerRuinParams: p must be in (0,1)");
    if (std::abs(p + q - 1.0) > 1e-12)
        throw std::invalid_argument("GamblerRuinParams: p + q must equal 1");
    if (!(0 < start && start < total_capital))
        throw std::invalid_argument("GamblerRuinParams: need 0 < start < total capital");
}

double gambler_ruin_probability(const GamblerRuinParams& params) {
    params.validate();
    if (std::abs(params.p - params.q) < 1e-12)
        return static_cast<double>(params.total_capital - params.start) /
               static_cast<double>(params.total_capital);
    const double r = params.q / params.p;
    const double ra = std::pow(r, params.total_capital);
    const double rl = std::pow(r, params.start);
    return (ra - rl) / (ra - 1.0);
}

double mc_gambler_ruin(const GamblerRuinParams& params, std::uint64_t trials, std::uint64_t seed) {
    params.validate();
    auto eng = rng::make_engine(seed);
    std::uint64_t broke = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        int pos = params.start;
        while (pos > 0 && pos < params.total_capital)
            pos += rng::bernoulli(eng, params.p) ? 1 : -1;
        if (pos == 0) ++broke;
    }
    return static_cast<double>(broke) / static_cast<double>(trials);
}

TrialSuccessBounds repeated_trial_success_bounds(double p, int lambda) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("trial success: p must be in [0,1]");
    if (lambda < 1) throw std::invalid_argument("trial success: lambda must be >= 1");
    const double pl = p * lambda;
    return {pl / (1.0 + pl), 2.0 * pl / (1.0 + pl)};
}

double repeated_trial_success(double p, int lambda) {
    return 1.0 - std::pow(1.0 - p, lambda);
}

double binomial_exceeds_half_floor() {
    return 0.5 * (1.0 - std::sqrt(1.0 / std::numbers::pi));
}

double binomial_exceeds_half_bound(int n) {
    if (n < 1) throw std::invalid_argument("binomial bound: n must be >= 1");
    if (n % 2 == 1) return 0.5;
    return 0.5 * (1.0 - std::sqrt(2.0 / (std::numbers::pi * n)));
}

double binomial_coefficient_exact(int n, int ell) {
    if (n < 0 || ell < 0 || ell > n || n > 62)
        throw std::invalid_argument("binomial_coefficient_exact: need 0 <= l <= n <= 62");
    std::uint64_t c = 1;
    const int k = std::min(ell, n - ell);
    for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / i;
    return static_cast<double>(c);
}

double binomial_exceeds_half_exact(int n) {
    if (n < 1 || n > 62) throw std::invalid_argument("binomial exact: need 1 <= n <= 62");
    long double above = 0.0L;
    for (int j = n / 2 + 1; j <= n; ++j)
        above += static_cast<long double>(binomial_coefficient_exact(n, j));
    return static_cast<double>(above / std::exp2l(static_cast<long double>(n)));
}

double central_binomial_lower_bound(int n, int ell) {
    if (n < 1 || ell < 0 || ell > n)
        throw std::invalid_argument("central_binomial_lower_bound: need 0 <= l <= n, n >= 1");
    const double gamma = std::abs(ell - n / 2.0) / std::sqrt(static_cast<double>(n));
    return std::exp2(static_cast<double>(n)) /
           (2.0 * std::sqrt(std::numbers::pi * n) * std::exp(4.0 * gamma));
}

double diversity_gain_lower_bound(int d, int m, int mu, double pc, double p_pair) {
    if (d < 0 || d % 2 != 0) throw std::invalid_argument("diversity gain bound: d must be even >= 0");
    if (m < 1 || mu < 2) throw std::invalid_argument("diversity gain bound: need m >= 1, mu >= 2");
    return (pc * p_pair / 4.0) * std::exp2(-static_cast<double>(d)) *
           (1.0 - static_cast<double>(2 * m + 1) / mu);
}

GrowthBounds growth_lower_bounds(int d, int n, int k, int mu, double pc, double p_pair) {
    if (d < 0 || d % 2 != 0 || d > 2 * k)
        throw std::invalid_argument("growth bounds: d must be even in [0, 2k]");
    if (3 * k > n) throw std::invalid_argument("growth bounds: require k <= n/3");
    const double half_pow = std::exp2(-static_cast<double>(d));
    GrowthBounds b;
    b.distance_increase = pc * p_pair * half_pow / (3.0 * std::numbers::e * n) *
                          (1.0 - 1.0 / static_cast<double>(mu));
    b.optimum_creation = pc * p_pair * half_pow /
                         (std::numbers::e * std::pow(static_cast<double>(n), k - d / 2));
    return b;
}

JumpRegion classify_jump_region(const core::Genotype& y, const core::FitnessSpec& spec) {
    const int ones = y.ones_count();
    if (ones == spec.n) throw std::invalid_argument("classify_jump_region: y is the optimum");
    if (ones == spec.plateau_ones()) throw std::invalid_argument("classify_jump_region: y is on the plateau");
    if (ones > spec.plateau_ones()) return JumpRegion::Valley;
    if (static_cast<double>(ones) <= spec.plateau_ones() - 8.0 * std::sqrt(static_cast<double>(spec.k)))
        return JumpRegion::SlopeFar;
    return JumpRegion::SlopeNear;
}

std::string to_string(JumpRegion region) {
    switch (region) {
        case JumpRegion::Valley: return "valley";
        case JumpRegion::SlopeFar: return "slope-far";
        case JumpRegion::SlopeNear: return "slope-near";
    }
    return "?";
}

CrossoverGainConstants CrossoverGainConstants::values() {
    CrossoverGainConstants c{};
    c.valley = 0.5 * (1.0 - std::sqrt(1.0 / std::numbers::pi));
    c.far_slope = c.valley - std::exp(-8.0 / 3.0);
    c.near_slope_coefficient = 1.0 / (6.0 * std::sqrt(2.0 * std::numbers::pi) *
                                      std::exp(4.0));
    c.relaxed = c.near_slope_coefficient;
    return c;
}

SingleIterationFrequencies measure_single_iteration(const std::vector<core::Genotype>& plateau_members,
                                                    const core::FitnessSpec& spec,
                                                    const selection::PairSelector& sel, double pc,
                                                    std::uint64_t trials, std::uint64_t seed) {
    if (trials < 10000)
        throw std::invalid_argument("measure_single_iteration: need at least 10^4 trials");
    for (const auto& g : plateau_members)
        if (!core::on_plateau(g, spec))
            throw std::invalid_argument("measure_single_iteration: population must be on the plateau");

    engine::GaConfig config;
    config.spec = spec;
    config.mu = static_cast<int>(plateau_members.size());
    config.crossover_probability = pc;
    config.pair_selector = sel;
    config.seed = seed;
    config.max_evaluations = static_cast<std::uint64_t>(config.mu) + 1;

    const auto before = diversity::snapshot_from_scratch(plateau_members);
    std::uint64_t gain = 0, distance = 0, optimum = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        engine::GaRun run(config, plateau_members, t);
        run.step();
        if (run.result().evaluations_to_optimum.has_value()) ++optimum;
        const auto after = diversity::snapshot_from_scratch(run.population().members);
        if (after.d > before.d) {
            ++distance;
            ++gain;
        } else if (after.m > before.m) {
            ++gain;
        }
    }
    return {make_estimate(gain, trials), make_estimate(distance, trials),
            make_estimate(optimum, trials)};
}

McEstimate measure_single_iteration_event(const std::vector<core::Genotype>& plateau_members,
                                          const core::FitnessSpec& spec,
                                          const selection::PairSelector& sel, double pc,
                                          IterationEvent event, std::uint64_t trials,
                                          std::uint64_t seed) {
    const auto all = measure_single_iteration(plateau_members, spec, sel, pc, trials, seed);
    switch (event) {
        case IterationEvent::DiversityGain: return all.diversity_gain;
        case IterationEvent::DistanceGain: return all.distance_gain;
        case IterationEvent::OptimumCreated: return all.optimum_created;
    }
    throw std::logic_error("measure_single_iteration_event: unknown event");
}

CrossoverImprovement measure_crossover_improvement(const core::Genotype& x, const core::Genotype& y,
                                                   const core::FitnessSpec& spec,
                                                   std::uint64_t trials, std::uint64_t seed) {
    const int fx = core::jump_fitness(x, spec);
    const int fy = core::jump_fitness(y, spec);
    if (fy > fx) throw std::invalid_argument("measure_crossover_improvement: need f(y) <= f(x)");
    if (core::is_optimum(x, spec))
        throw std::invalid_argument("measure_crossover_improvement: x must not be the optimum");
    if (x == y) throw std::invalid_argument("measure_crossover_improvement: x and y must differ");
    const double relaxed_floor = fy - std::sqrt(static_cast<double>(spec.k));
    auto eng = rng::make_engine(seed);
    std::uint64_t improves = 0, relaxed = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const core::Genotype z = operators::uniform_crossover(x, y, eng);
        const int fz = core::jump_fitness(z, spec);
        if (fz > fy) ++improves;
        if (static_cast<double>(fz) > relaxed_floor) ++relaxed;
    }
    return {make_estimate(improves, trials), make_estimate(relaxed, trials)};
}

std::vector<core::Genotype> plateau_population_with_diversity(const core::FitnessSpec& spec, int mu,
                                                              int d, int m) {
    spec.validate();
    if (d < 2 || d % 2 != 0 || d > 2 * spec.k)
        throw std::invalid_argument("plateau population: d must be even in [2, 2k]");
    if (d / 2 > spec.n - spec.k)
        throw std::invalid_argument("plateau population: d/2 exceeds available one-positions");
    if (m < 1 || 2 * m > mu)
        throw std::invalid_argument("plateau population: need 1 <= m <= mu/2");

    const int ones = spec.plateau_ones();
    core::Genotype base = core::Genotype::from_string(std::string(ones, '1') +
                                                      std::string(spec.k, '0'));
    // Partner: d/2 one-positions swapped against d/2 zero-positions.
    std::string partner_bits = base.to_string();
    for (int i = 0; i < d / 2; ++i) {
        partner_bits[ones - 1 - i] = '0';
        partner_bits[ones + i] = '1';
    }
    core::Genotype partner = core::Genotype::from_string(partner_bits);

    std::vector<core::Genotype> members;
    members.reserve(mu);
    for (int i = 0; i < mu - m; ++i) members.push_back(base);
    for (int i = 0; i < m; ++i) members.push_back(partner);
    return members;
}

std::vector<ValidationRow> validate_ruin_grid(std::uint64_t trials, std::uint64_t seed) {
    std::vector<ValidationRow> rows;
    // The +-0.01 tolerance is calibrated for 10^5 trials (about six standard
    // deviations); scale it for other trial counts.
    const double tolerance = 0.01 * std::sqrt(100000.0 / static_cast<double>(trials));
    int cell = 0;
    for (double p : {0.35, 0.5, 0.65}) {
        for (int a : {4, 8, 16}) {
            GamblerRuinParams params{p, 1.0 - p, a, a / 2};
            const double formula = gambler_ruin_probability(params);
            const double mc = mc_gambler_ruin(params, trials, rng::derive_seed(seed, cell++));
            ValidationRow row;
            row.check = "ruin-formula-mc";
            row.detail = "p=" + std::to_string(p) + " a=" + std::to_string(a) +
                         " l=" + std::to_string(a / 2);
            row.bound = formula;
            row.observed = mc;
            row.slack = tolerance;
            row.pass = std::abs(mc - formula) <= tolerance;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<ValidationRow> validate_trial_amplification() {
    int checked = 0, ok = 0;
    for (int pi = 1; pi <= 99; ++pi) {
        const double p = pi / 100.0;
        for (int lambda = 1; lambda <= 100; ++lambda) {
            const auto bounds = repeated_trial_success_bounds(p, lambda);
            const double value = repeated_trial_success(p, lambda);
            ++checked;
            if (value >= bounds.lower - 1e-12 && value <= bounds.upper + 1e-12) ++ok;
        }
    }
    ValidationRow row;
    row.check = "trial-amplification-bracket";
    row.detail = std::to_string(checked) + " grid points";
    row.bound = 1.0;
    row.observed = static_cast<double>(ok) / checked;
    row.slack = 0.0;
    row.pass = ok == checked;
    return {row};
}

std::vector<ValidationRow> validate_binomial_median(int max_n) {
    double min_margin = 1.0;
    bool odd_exact = true;
    const double floor_bound = binomial_exceeds_half_floor();
    for (int n = 1; n <= max_n; ++n) {
        const double exact = binomial_exceeds_half_exact(n);
        const double bound = binomial_exceeds_half_bound(n);
        min_margin = std::min(min_margin, exact - bound);
        min_margin = std::min(min_margin, exact - floor_bound);
        if (n % 2 == 1 && exact != 0.5) odd_exact = false;
    }
    ValidationRow row;
    row.check = "binomial-median-bound";
    row.detail = "n <= " + std::to_string(max_n) + ", exact enumeration";
    row.bound = 0.0;
    row.observed = min_margin;
    row.slack = 0.0;
    row.pass = min_margin >= 0.0 && odd_exact;
    return {row};
}

std::vector<ValidationRow> validate_binomial_coefficient(int max_n) {
    // The bound applies to central coefficients, |l - n/2| <= sqrt(n); at the
    // extreme tails it overshoots the true coefficient (e.g. n=15, l=0).
    double min_ratio = std::numeric_limits<double>::infinity();
    int checked = 0;
    for (int n = 1; n <= max_n; ++n)
        for (int ell = 0; ell <= n; ++ell) {
            if (std::abs(ell - n / 2.0) > std::sqrt(static_cast<double>(n))) continue;
            ++checked;
            min_ratio = std::min(min_ratio, binomial_coefficient_exact(n, ell) /
                                                central_binomial_lower_bound(n, ell));
        }
    ValidationRow row;
    row.check = "binomial-coefficient-bound";
    row.detail = "n <= " + std::to_string(max_n) + ", |l-n/2| <= sqrt(n), " +
                 std::to_string(checked) + " coefficients";
    row.bound = 1.0;
    row.observed = min_ratio;
    row.slack = 0.0;
    row.pass = min_ratio >= 1.0;
    return {row};
}

std::vector<ValidationRow> validate_increase_bounds(std::uint64_t trials, std::uint64_t seed) {
    std::vector<ValidationRow> rows;
    const auto selector = selection::PairSelector::furthest();
    const double pc = 1.0, p_pair = 1.0;
    int cell = 0;
    for (int n : {9, 12}) {
        for (int k : {2, 3}) {
            const core::FitnessSpec spec{n, k};
            for (int mu : {8, 16}) {
                for (int d = 2; d <= 2 * k; d += 2) {
                    for (int m : {1, 2}) {
                        const auto members = plateau_population_with_diversity(spec, mu, d, m);
                        const auto freqs = measure_single_iteration(members, spec, selector, pc,
                                                                    trials,
                                                                    rng::derive_seed(seed, cell));
                        const std::string detail = "n=" + std::to_string(n) +
                                                   " k=" + std::to_string(k) +
                                                   " mu=" + std::to_string(mu) +
                                                   " d=" + std::to_string(d) +
                                                   " m=" + std::to_string(m);
                        rows.push_back(lower_bound_row(
                            "diversity-gain-bound", detail,
                            diversity_gain_lower_bound(d, m, mu, pc, p_pair),
                            freqs.diversity_gain.frequency, trials));
                        const auto growth = growth_lower_bounds(d, n, k, mu, pc, p_pair);
                        if (d < 2 * k)
                            rows.push_back(lower_bound_row("distance-growth-bound", detail,
                                                           growth.distance_increase,
                                                           freqs.distance_gain.frequency, trials));
                        rows.push_back(lower_bound_row("optimum-creation-bound", detail,
                                                       growth.optimum_creation,
                                                       freqs.optimum_created.frequency, trials));
                        ++cell;
                    }
                }
            }
        }
    }
    return rows;
}

namespace {

// A pair of equal-fitness points whose one-positions agree except for
// `extras` disjoint positions on each side.
struct DisjointExtrasPair {
    core::Genotype x;
    core::Genotype y;
};

DisjointExtrasPair disjoint_extras_pair(int n, int common_ones, int extras) {
    std::string xs(n, '0'), ys(n, '0');
    for (int i = 0; i < common_ones; ++i) xs[i] = ys[i] = '1';
    for (int i = 0; i < extras; ++i) {
        ys[common_ones + i] = '1';
        xs[common_ones + extras + i] = '1';
    }
    return {core::Genotype::from_string(xs), core::Genotype::from_string(ys)};
}

} // namespace

std::vector<ValidationRow> validate_crossover_gains(std::uint64_t trials, std::uint64_t seed) {
    std::vector<ValidationRow> rows;
    const auto c = CrossoverGainConstants::values();

    {
        // Valley, n=1000, k=100: zero sets of size 50 on disjoint positions.
        const core::FitnessSpec spec{1000, 100};
        std::string xs(1000, '1'), ys(1000, '1');
        for (int i = 0; i < 50; ++i) ys[i] = '0';
        for (int i = 50; i < 100; ++i) xs[i] = '0';
        const auto est = measure_crossover_improvement(core::Genotype::from_string(xs),
                                                       core::Genotype::from_string(ys), spec,
                                                       trials, rng::derive_seed(seed, 1001));
        rows.push_back(lower_bound_row("crossover-gain-valley", "n=1000 k=100 |y|1=950", c.valley,
                                       est.improves.frequency, trials));
    }
    {
        // Far slope, n=1000, k=100, |y|1 = 800 <= 820 = n-k-8*sqrt(k).
        const core::FitnessSpec spec{1000, 100};
        const auto pair = disjoint_extras_pair(1000, 710, 90);
        const auto est = measure_crossover_improvement(pair.x, pair.y, spec, trials,
                                                       rng::derive_seed(seed, 1002));
        rows.push_back(lower_bound_row("crossover-gain-far-slope", "n=1000 k=100 |y|1=800",
                                       c.far_slope, est.improves.frequency, trials));
    }
    {
        // Near slope, n=200, k=25: 135 < |y|1 = 170 < 175.
        const core::FitnessSpec spec{200, 25};
        const auto pair = disjoint_extras_pair(200, 160, 10);
        const auto est = measure_crossover_improvement(pair.x, pair.y, spec, trials,
                                                       rng::derive_seed(seed, 1003));
        rows.push_back(lower_bound_row("crossover-gain-near-slope", "n=200 k=25 |y|1=170",
                                       c.near_slope_coefficient / std::sqrt(25.0),
                                       est.improves.frequency, trials));
    }
    {
        // Relaxed improvement from a plateau pair with disjoint zero sets.
        const core::FitnessSpec spec{200, 25};
        std::string xs(200, '1'), ys(200, '1');
        for (int i = 175; i < 200; ++i) ys[i] = '0';
        for (int i = 150; i < 175; ++i) xs[i] = '0';
        const auto est = measure_crossover_improvement(core::Genotype::from_string(xs),
                                                       core::Genotype::from_string(ys), spec,
                                                       trials, rng::derive_seed(seed, 1004));
        rows.push_back(lower_bound_row("crossover-gain-relaxed", "n=200 k=25 plateau pair",
                                       c.relaxed, est.improves_relaxed.frequency, trials));
    }
    {
        // Small k close to the plateau: only strict positivity is guaranteed.
        const core::FitnessSpec spec{100, 9};
        const auto pair = disjoint_extras_pair(100, 52, 8);
        const auto est = measure_crossover_improvement(pair.x, pair.y, spec, trials,
                                                       rng::derive_seed(seed, 1005));
        ValidationRow row;
        row.check = "crossover-gain-small-k-positive";
        row.detail = "n=100 k=9 |y|1=60";
        row.bound = 0.0;
        row.observed = est.improves.frequency;
        row.slack = 0.0;
        row.pass = est.improves.hits >= 1;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ValidationRow> run_validation(std::uint64_t trials, std::uint64_t seed) {
    std::vector<ValidationRow> rows;
    auto append = [&rows](std::vector<ValidationRow> more) {
        rows.insert(rows.end(), std::make_move_iterator(more.begin()),
                    std::make_move_iterator(more.end()));
    };
    append(validate_ruin_grid(trials, seed));
    append(validate_trial_amplification());
    append(validate_binomial_median());
    append(validate_binomial_coefficient());
    append(validate_increase_bounds(trials, rng::derive_seed(seed, 2)));
    append(validate_crossover_gains(trials, rng::derive_seed(seed, 3)));
    return rows;
}

} // namespace jumpga::oracles
