#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <jumpga/engine.hpp>
#include <jumpga/fitness.hpp>
#include <jumpga/selection.hpp>

namespace jumpga::oracles {

/// Biased +-1 random walk on {0,...,a} absorbing at both ends: win a dollar
/// with probability p, lose with q = 1-p, start at 0 < start < a.
struct GamblerRuinParams {
    double p = 0.5;
    double q = 0.5;
    int total_capital = 0;  // a
    int start = 0;          // l

    void validate() const;
};

/// Probability of absorption at 0: ((q/p)^a - (q/p)^l) / ((q/p)^a - 1),
/// with the symmetric-walk limit (a - l) / a when p = q.
double gambler_ruin_probability(const GamblerRuinParams& params);

/// Absorption frequency over simulated walks.
double mc_gambler_ruin(const GamblerRuinParams& params, std::uint64_t trials, std::uint64_t seed);

struct TrialSuccessBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Brackets 1-(1-p)^lambda within [p*lambda/(1+p*lambda), 2*p*lambda/(1+p*lambda)].
TrialSuccessBounds repeated_trial_success_bounds(double p, int lambda);
double repeated_trial_success(double p, int lambda);

/// Lower bound on Pr[X > n/2] for X ~ Bin(n, 1/2): exactly 1/2 for odd n,
/// (1/2)(1 - sqrt(2/(pi n))) for even n; never below (1/2)(1 - sqrt(1/pi)).
double binomial_exceeds_half_bound(int n);
double binomial_exceeds_half_floor();

/// Exact Pr[X > n/2], X ~ Bin(n, 1/2), for n <= 62 (exact in doubles).
double binomial_exceeds_half_exact(int n);

/// Lower bound 2^n / (2 sqrt(pi n) e^{4 gamma}) on C(n, l), where
/// gamma = |l - n/2| / sqrt(n). Valid as a bound for central l (gamma <= 1,
/// i.e. |l - n/2| <= sqrt(n)), which covers every use in this project; for
/// extreme tails (gamma beyond ~2) the true coefficient drops below it.
double central_binomial_lower_bound(int n, int ell);
double binomial_coefficient_exact(int n, int ell);  // n <= 62

/// Lower bound on the per-iteration probability that, on an all-plateau
/// population with max distance d and m disjoint max pairs, d or m grows:
/// (pc * p_pair / 4) * (1/2)^d * (1 - (2m+1)/mu). May be <= 0 (vacuous).
double diversity_gain_lower_bound(int d, int m, int mu, double pc, double p_pair);

struct GrowthBounds {
    double distance_increase = 0.0;  // valid for d < 2k
    double optimum_creation = 0.0;
};

/// Lower bounds for an all-plateau population with max distance d (requires
/// k <= n/3, d even, 0 <= d <= 2k):
///   distance_increase: pc * p_pair * (1/2)^d * (1/(3 e n)) * (1 - 1/mu)
///   optimum_creation:  pc * p_pair * (1/2)^d * (1/(e n^{k - d/2}))
GrowthBounds growth_lower_bounds(int d, int n, int k, int mu, double pc, double p_pair);

/// Landscape regions of a non-plateau, non-optimal point, split at
/// 8*sqrt(k) below the plateau level.
enum class JumpRegion { Valley, SlopeFar, SlopeNear };
JumpRegion classify_jump_region(const core::Genotype& y, const core::FitnessSpec& spec);
std::string to_string(JumpRegion region);

/// Guaranteed crossover-offspring improvement constants:
///   valley:                  (1/2)(1 - sqrt(1/pi))          ~ 0.2179
///   far_slope:               valley - e^{-8/3}              >= 0.148 (k >= 100)
///   near_slope_coefficient:  1/(6 sqrt(2 pi) e^4), bound is coeff/sqrt(k)
///   relaxed:                 1/(6 e^4 sqrt(2 pi)), for beating f(y)-sqrt(k)
struct CrossoverGainConstants {
    double valley;
    double far_slope;
    double near_slope_coefficient;
    double relaxed;

    static CrossoverGainConstants values();
};

struct McEstimate {
    double frequency = 0.0;
    double half_width_3sigma = 0.0;  // from the observed frequency
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
};

enum class IterationEvent { DiversityGain, DistanceGain, OptimumCreated };

/// Frequencies of the three events over independent single GA iterations
/// started from the same all-plateau population. Each trial runs one engine
/// iteration on a fresh copy with its own derived stream; (d, m) before and
/// after are recomputed from scratch, never taken from engine bookkeeping.
struct SingleIterationFrequencies {
    McEstimate diversity_gain;   // d or m increased
    McEstimate distance_gain;    // d increased
    McEstimate optimum_created;  // all-ones present afterwards
};

SingleIterationFrequencies measure_single_iteration(const std::vector<core::Genotype>& plateau_members,
                                                    const core::FitnessSpec& spec,
                                                    const selection::PairSelector& sel, double pc,
                                                    std::uint64_t trials, std::uint64_t seed);

/// Single-event variant; trials must be >= 10^4 and every member on the plateau.
McEstimate measure_single_iteration_event(const std::vector<core::Genotype>& plateau_members,
                                          const core::FitnessSpec& spec,
                                          const selection::PairSelector& sel, double pc,
                                          IterationEvent event, std::uint64_t trials,
                                          std::uint64_t seed);

/// Frequencies over pure crossover draws z of x and y (no mutation):
/// f(z) > f(y), and f(z) > f(y) - sqrt(k). Requires f(y) <= f(x), x not
/// optimal, x != y.
struct CrossoverImprovement {
    McEstimate improves;
    McEstimate improves_relaxed;
};

CrossoverImprovement measure_crossover_improvement(const core::Genotype& x, const core::Genotype& y,
                                                   const core::FitnessSpec& spec,
                                                   std::uint64_t trials, std::uint64_t seed);

/// Deterministic all-plateau population with max distance exactly d and
/// exactly m disjoint max pairs: m copies of a partner obtained from a base
/// plateau string by swapping d/2 one-positions with d/2 zero-positions,
/// padded with mu - m copies of the base. Requires d even, 2 <= d <= 2k,
/// 1 <= m <= mu/2.
std::vector<core::Genotype> plateau_population_with_diversity(const core::FitnessSpec& spec, int mu,
                                                              int d, int m);

/// One validation check: observed must reach bound - slack (or sit within
/// slack of it, for two-sided checks).
struct ValidationRow {
    std::string check;
    std::string detail;
    double bound = 0.0;
    double observed = 0.0;
    double slack = 0.0;
    bool pass = false;
};

std::vector<ValidationRow> validate_ruin_grid(std::uint64_t trials, std::uint64_t seed);
std::vector<ValidationRow> validate_trial_amplification();
std::vector<ValidationRow> validate_binomial_median(int max_n = 30);
std::vector<ValidationRow> validate_binomial_coefficient(int max_n = 30);
std::vector<ValidationRow> validate_increase_bounds(std::uint64_t trials, std::uint64_t seed);
std::vector<ValidationRow> validate_crossover_gains(std::uint64_t trials, std::uint64_t seed);

/// The whole oracle suite; `trials` scales every Monte Carlo component.
std::vector<ValidationRow> run_validation(std::uint64_t trials, std::uint64_t seed);

} // namespace jumpga::oracles
