#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <jumpga/diversity.hpp>
#include <jumpga/fitness.hpp>
#include <jumpga/operators.hpp>
#include <jumpga/population.hpp>
#include <jumpga/selection.hpp>

namespace jumpga::engine {

/// Full configuration of one steady-state GA run.
struct GaConfig {
    enum class Init { UniformRandom, AllOnPlateau };

    core::FitnessSpec spec;
    int mu = 2;
    double crossover_probability = 0.5;  // p_c
    selection::PairSelector pair_selector = selection::PairSelector::furthest();
    selection::MutationSelector mutation_selector;
    Init init = Init::UniformRandom;
    std::uint64_t seed = 0;
    std::uint64_t max_evaluations = 0;
    std::uint64_t trace_stride = 0;  // 0 disables trajectory records

    /// Track the running minimum over iterations of the probability that the
    /// pair selector returns a max-distance pair. Intended for small mu; the
    /// power-law variant re-ranks all pairs every iteration.
    bool track_min_max_pair_probability = false;

    /// Debug: at every trace sample, rebuild the diversity state from scratch
    /// and compare with the incrementally maintained one (meant for mu <= 16).
    bool verify_snapshots = false;

    void validate() const;
    std::vector<std::string> warnings() const;

    friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

std::string to_string(GaConfig::Init init);
GaConfig::Init parse_init(std::string_view text);

struct TraceRecord {
    std::uint64_t t = 0;            // iterations completed
    std::uint64_t evaluations = 0;
    int d = 0;
    int m = 0;
    std::uint64_t max_pair_count = 0;
    int min_fitness = 0;
    int best_fitness = 0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct RunResult {
    std::uint64_t config_seed = 0;
    std::uint64_t replicate_index = 0;
    std::uint64_t stream_seed = 0;
    std::optional<std::uint64_t> evaluations_to_all_plateau;  // absent: not reached
    std::optional<std::uint64_t> evaluations_to_optimum;      // absent: budget exhausted
    std::uint64_t total_evaluations = 0;
    int final_best_fitness = 0;
    std::vector<TraceRecord> trajectory;
    std::optional<double> running_min_max_pair_probability;

    bool censored() const { return !evaluations_to_optimum.has_value(); }

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Observer invoked once per iteration with the produced offspring and
/// whether the replacement accepted it. Must not touch the run's RNG.
using IterationObserver =
    std::function<void(const operators::OffspringRecord&, bool accepted)>;

/// One sequential run, stepped one iteration at a time.
///
/// All randomness comes from a single stream seeded with `stream_seed`. Draw
/// order per iteration: branch Bernoulli; parent selection (pair or single);
/// crossover word masks (crossover branch only); mutation gap draws;
/// replacement tie-break.
class GaRun {
public:
    GaRun(const GaConfig& config, std::uint64_t replicate_index);
    GaRun(const GaConfig& config, std::vector<core::Genotype> initial_members,
          std::uint64_t replicate_index);

    void set_observer(IterationObserver observer) { observer_ = std::move(observer); }

    bool finished() const;
    void step();
    void run_to_completion();

    const core::Population& population() const { return pop_; }
    const diversity::DistanceMatrix& matrix() const { return matrix_; }
    std::uint64_t evaluations() const { return evaluations_; }
    std::uint64_t iterations() const { return iterations_; }

    /// Result reflecting the current state; final once finished().
    RunResult result() const;

private:
    void evaluate_initial();
    void record_hits();
    void maybe_sample(bool force);
    void update_max_pair_probability_minimum();

    GaConfig config_;
    std::uint64_t replicate_index_ = 0;
    std::uint64_t stream_seed_ = 0;
    rng::Engine eng_;
    core::Population pop_;
    diversity::DistanceMatrix matrix_;
    IterationObserver observer_;

    std::uint64_t evaluations_ = 0;
    std::uint64_t iterations_ = 0;
    int best_fitness_ = 0;
    int plateau_or_optimal_slots_ = 0;
    int strictly_plateau_slots_ = 0;
    std::optional<std::uint64_t> evals_to_all_plateau_;
    std::optional<std::uint64_t> evals_to_optimum_;
    std::optional<double> min_max_pair_probability_;
    std::vector<TraceRecord> trajectory_;
    std::uint64_t last_sampled_t_ = 0;
    bool sampled_initial_ = false;
};

/// Replicate `index` of `config`: a run whose stream seed is
/// derive_seed(config.seed, index).
RunResult run_replicate(const GaConfig& config, std::uint64_t replicate_index,
                        const IterationObserver* observer = nullptr);

/// Single run; identical to replicate 0.
RunResult run(const GaConfig& config);

/// `count` replicates with derived seeds, fanned over up to `parallelism`
/// worker threads. Results are ordered by replicate index and do not depend
/// on the parallelism degree.
std::vector<RunResult> run_batch(const GaConfig& config, int count, int parallelism);

} // namespace jumpga::engine
