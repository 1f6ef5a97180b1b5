#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <jumpga/engine.hpp>

namespace jumpga::harness {

/// Cartesian experiment grid. Cells are enumerated n (outer), then k, mu,
/// pc, selector (inner); cell c runs with config seed derive_seed(seed, c),
/// and replicate i of a cell with stream seed derived from that in turn.
struct SweepSpec {
    std::vector<int> n;
    std::vector<int> k;
    std::vector<int> mu;
    std::vector<double> pc;
    std::vector<selection::PairSelector> selectors;
    engine::GaConfig::Init init = engine::GaConfig::Init::UniformRandom;
    int replicates = 1;
    std::uint64_t budget = 0;
    std::uint64_t seed = 1;
    std::uint64_t trace_stride = 0;
    bool trace_first_replicate = false;  // keep the trajectory of replicate 0 per cell

    void validate() const;
    std::vector<engine::GaConfig> expand() const;
};

struct ReplicateRow {
    int config_index = 0;
    int n = 0, k = 0, mu = 0;
    double pc = 0.0;
    std::string selector;
    std::string init;
    std::uint64_t budget = 0;
    std::uint64_t cell_seed = 0;
    int replicate = 0;
    std::uint64_t stream_seed = 0;
    std::optional<std::uint64_t> evaluations_to_all_plateau;
    std::optional<std::uint64_t> evaluations_to_optimum;
    std::uint64_t total_evaluations = 0;
    int final_best_fitness = 0;
    bool censored = false;

    friend bool operator==(const ReplicateRow&, const ReplicateRow&) = default;
};

/// Aggregates per cell. Censored replicates contribute the budget value to
/// the hitting-time statistics and are counted.
struct AggregateRow {
    int config_index = 0;
    int n = 0, k = 0, mu = 0;
    double pc = 0.0;
    std::string selector;
    std::string init;
    std::uint64_t budget = 0;
    std::uint64_t cell_seed = 0;
    int replicates = 0;
    double median_evals_to_optimum = 0.0;
    double mean_evals_to_optimum = 0.0;
    double iqr_evals_to_optimum = 0.0;
    double median_evals_to_plateau = 0.0;
    int censored_count = 0;

    friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct ResultTable {
    std::vector<ReplicateRow> rows;
    std::vector<AggregateRow> aggregates;

    friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

struct CellTrace {
    int config_index = 0;
    std::vector<engine::TraceRecord> records;
};

struct SweepOutput {
    ResultTable table;
    std::vector<CellTrace> traces;  // replicate 0 per cell, when requested
};

SweepOutput run_sweep(const SweepSpec& spec, int parallelism);

/// Recomputes a cell's aggregate from replicate rows (round-trip check aid).
AggregateRow aggregate_of(const std::vector<ReplicateRow>& cell_rows);

std::string to_csv(const ResultTable& table);
ResultTable table_from_csv(std::string_view text);

std::string trace_to_csv(const std::vector<engine::TraceRecord>& records);

/// Flat JSON object for one run, schema "jumpga-result-v1". Deterministic
/// byte-for-byte for a given config and result.
std::string result_json(const engine::GaConfig& config, const engine::RunResult& result);

struct ExperimentPreset {
    std::string name;
    SweepSpec spec;
};

ExperimentPreset preset_selection_comparison();
ExperimentPreset preset_plateau_escape();
ExperimentPreset preset_hill_climb();
std::optional<ExperimentPreset> preset_by_name(std::string_view name);
std::vector<std::string> preset_names();

inline SweepOutput run_preset(const ExperimentPreset& preset, int parallelism) {
    return run_sweep(preset.spec, parallelism);
}

/// JUMPGA_THREADS, when set to a positive integer, overrides the request.
int resolve_parallelism(int requested);

/// Quantile with linear interpolation between order statistics (values need
/// not be sorted).
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);
double interquartile_range(std::vector<double> values);

std::string format_double(double value);  // shortest round-trip form

} // namespace jumpga::harness
