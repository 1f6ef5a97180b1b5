#include <jumpga/engine.hpp>

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace jumpga::engine {

void GaConfig::validate() const {
    spec.validate();
    pair_selector.validate();
    if (mu < 2) throw std::invalid_argument("GaConfig: mu must be >= 2");
    if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0))
        throw std::invalid_argument("GaConfig: crossover probability must be in [0,1]");
    if (max_evaluations < static_cast<std::uint64_t>(mu))
        throw std::invalid_argument("GaConfig: evaluation budget must be >= mu");
}

std::vector<std::string> GaConfig::warnings() const {
    std::vector<std::string> out;
    if (!spec.in_supported_regime())
        out.push_back("k > n/3: outside the regime the runtime guarantees cover");
    return out;
}

std::string to_string(GaConfig::Init init) {
    return init == GaConfig::Init::UniformRandom ? "random" : "plateau";
}

GaConfig::Init parse_init(std::string_view text) {
    if (text == "random") return GaConfig::Init::UniformRandom;
    if (text == "plateau") return GaConfig::Init::AllOnPlateau;
    throw std::invalid_argument("init: expected 'random' or 'plateau', got '" + std::string(text) + "'");
}

GaRun::GaRun(const GaConfig& config, std::uint64_t replicate_index)
    : config_(config),
      replicate_index_(replicate_index),
      stream_seed_(rng::derive_seed(config.seed, replicate_index)),
      eng_(rng::make_engine(stream_seed_)) {
    config_.validate();
    pop_.members.reserve(config_.mu);
    for (int i = 0; i < config_.mu; ++i) {
        if (config_.init == GaConfig::Init::AllOnPlateau)
            pop_.members.push_back(core::random_plateau_genotype(config_.spec, eng_));
        else
            pop_.members.push_back(core::random_genotype(config_.spec.n, eng_));
    }
    evaluate_initial();
}

GaRun::GaRun(const GaConfig& config, std::vector<core::Genotype> initial_members,
             std::uint64_t replicate_index)
    : config_(config),
      replicate_index_(replicate_index),
      stream_seed_(rng::derive_seed(config.seed, replicate_index)),
      eng_(rng::make_engine(stream_seed_)) {
    config_.validate();
    if (initial_members.size() != static_cast<std::size_t>(config_.mu))
        throw std::invalid_argument("GaRun: initial population size does not match mu");
    pop_.members = std::move(initial_members);
    evaluate_initial();
}

void GaRun::evaluate_initial() {
    pop_.fitness.resize(pop_.size());
    for (std::size_t i = 0; i < pop_.size(); ++i) {
        pop_.fitness[i] = core::jump_fitness(pop_.members[i], config_.spec);
        ++evaluations_;
    }
    matrix_.build(pop_.members);
    best_fitness_ = *std::max_element(pop_.fitness.begin(), pop_.fitness.end());
    plateau_or_optimal_slots_ = 0;
    strictly_plateau_slots_ = 0;
    for (int f : pop_.fitness) {
        if (core::fitness_is_plateau_or_optimum(f, config_.spec)) ++plateau_or_optimal_slots_;
        if (core::fitness_on_plateau(f, config_.spec)) ++strictly_plateau_slots_;
    }
    record_hits();
    update_max_pair_probability_minimum();
    maybe_sample(false);
}

bool GaRun::finished() const {
    return evals_to_optimum_.has_value() || evaluations_ >= config_.max_evaluations;
}

void GaRun::record_hits() {
    if (!evals_to_optimum_ && best_fitness_ == config_.spec.optimum_fitness())
        evals_to_optimum_ = evaluations_;
    if (!evals_to_all_plateau_ && plateau_or_optimal_slots_ == config_.mu)
        evals_to_all_plateau_ = evaluations_;
    // Elitism: once every slot is plateau-or-optimal none may leave that set.
    if (evals_to_all_plateau_ && plateau_or_optimal_slots_ < config_.mu)
        throw std::logic_error("GaRun: slot left the plateau/optimum set after full coverage");
    // All-plateau populations only realize even max distances.
    if (strictly_plateau_slots_ == config_.mu && matrix_.max_distance() % 2 != 0)
        throw std::logic_error("GaRun: odd max distance in an all-plateau population");
}

void GaRun::update_max_pair_probability_minimum() {
    if (!config_.track_min_max_pair_probability || config_.mu < 2) return;
    const double p = selection::max_distance_pair_probability(matrix_, config_.pair_selector);
    if (!min_max_pair_probability_ || p < *min_max_pair_probability_)
        min_max_pair_probability_ = p;
}

void GaRun::maybe_sample(bool force) {
    if (config_.trace_stride == 0) return;
    const bool due = !sampled_initial_ || iterations_ % config_.trace_stride == 0;
    if (!due && !(force && last_sampled_t_ != iterations_)) return;

    const diversity::DiversitySnapshot snap = diversity::snapshot(matrix_);
    if (snap.m > config_.mu / 2)
        throw std::logic_error("GaRun: disjoint max pairs exceed mu/2");
    if (config_.verify_snapshots) {
        const auto fresh = diversity::snapshot_from_scratch(pop_.members);
        if (fresh != snap)
            throw std::logic_error("GaRun: incremental diversity state differs from recomputation");
    }
    const int min_fitness = *std::min_element(pop_.fitness.begin(), pop_.fitness.end());
    trajectory_.push_back({iterations_, evaluations_, snap.d, snap.m, snap.max_pair_count,
                           min_fitness, best_fitness_});
    sampled_initial_ = true;
    last_sampled_t_ = iterations_;
}

void GaRun::step() {
    if (finished()) throw std::logic_error("GaRun::step: run already finished");
    ++iterations_;

    operators::OffspringRecord record;
    core::Genotype offspring;
    if (rng::bernoulli(eng_, config_.crossover_probability)) {
        const auto [a, b] =
            selection::select_crossover_parents(pop_, matrix_, config_.pair_selector, eng_);
        core::Genotype child = operators::uniform_crossover(pop_.members[a], pop_.members[b], eng_);
        offspring = operators::standard_bit_mutation(child, eng_);
        record.via_crossover = true;
        record.parent_a = a;
        record.parent_b = b;
        record.bits_flipped_by_mutation = core::hamming(child, offspring);
    } else {
        const std::size_t s = selection::select_mutation_parent(pop_, config_.mutation_selector, eng_);
        offspring = operators::standard_bit_mutation(pop_.members[s], eng_);
        record.via_crossover = false;
        record.parent_a = s;
        record.bits_flipped_by_mutation = core::hamming(pop_.members[s], offspring);
    }
    if (observer_) record.offspring = offspring;

    const int fitness_y = core::jump_fitness(offspring, config_.spec);
    ++evaluations_;

    const auto outcome = operators::elitist_replace(pop_, std::move(offspring), fitness_y, eng_);
    if (outcome.accepted) {
        matrix_.replace(outcome.victim_slot, pop_.members);
        best_fitness_ = std::max(best_fitness_, fitness_y);
        if (core::fitness_is_plateau_or_optimum(outcome.victim_fitness, config_.spec))
            --plateau_or_optimal_slots_;
        if (core::fitness_is_plateau_or_optimum(fitness_y, config_.spec))
            ++plateau_or_optimal_slots_;
        if (core::fitness_on_plateau(outcome.victim_fitness, config_.spec))
            --strictly_plateau_slots_;
        if (core::fitness_on_plateau(fitness_y, config_.spec)) ++strictly_plateau_slots_;
    }

    record_hits();
    update_max_pair_probability_minimum();
    maybe_sample(finished());
    if (observer_) observer_(record, outcome.accepted);
}

void GaRun::run_to_completion() {
    while (!finished()) step();
}

RunResult GaRun::result() const {
    RunResult r;
    r.config_seed = config_.seed;
    r.replicate_index = replicate_index_;
    r.stream_seed = stream_seed_;
    r.evaluations_to_all_plateau = evals_to_all_plateau_;
    r.evaluations_to_optimum = evals_to_optimum_;
    r.total_evaluations = evaluations_;
    r.final_best_fitness = best_fitness_;
    r.trajectory = trajectory_;
    r.running_min_max_pair_probability = min_max_pair_probability_;
    return r;
}

RunResult run_replicate(const GaConfig& config, std::uint64_t replicate_index,
                        const IterationObserver* observer) {
    GaRun run(config, replicate_index);
    if (observer) run.set_observer(*observer);
    run.run_to_completion();
    return run.result();
}

RunResult run(const GaConfig& config) {
    return run_replicate(config, 0);
}

std::vector<RunResult> run_batch(const GaConfig& config, int count, int parallelism) {
    if (count < 1) throw std::invalid_argument("run_batch: replicate count must be >= 1");
    config.validate();
    std::vector<RunResult> results(count);
    const int workers = std::clamp(parallelism, 1, count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) results[i] = run_replicate(config, i);
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                results[i] = run_replicate(config, i);
            }
        });
    for (auto& t : pool) t.join();
    return results;
}

} // namespace jumpga::engine
