#include <jumpga/harness.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include <jumpga/csv.hpp>

namespace jumpga::harness {

void SweepSpec::validate() const {
    if (n.empty() || k.empty() || mu.empty() || pc.empty() || selectors.empty())
        throw std::invalid_argument("SweepSpec: grid must be non-empty on every axis");
    if (replicates < 1) throw std::invalid_argument("SweepSpec: replicates must be >= 1");
    for (const auto& c : expand()) c.validate();
}

std::vector<engine::GaConfig> SweepSpec::expand() const {
    std::vector<engine::GaConfig> cells;
    int index = 0;
    for (int nv : n)
        for (int kv : k)
            for (int muv : mu)
                for (double pcv : pc)
                    for (const auto& sel : selectors) {
                        engine::GaConfig c;
                        c.spec = {nv, kv};
                        c.mu = muv;
                        c.crossover_probability = pcv;
                        c.pair_selector = sel;
                        c.init = init;
                        c.seed = rng::derive_seed(seed, index);
                        c.max_evaluations = budget;
                        c.trace_stride = 0;
                        cells.push_back(c);
                        ++index;
                    }
    return cells;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double interquartile_range(std::vector<double> values) {
    const double first_quartile = quantile(values, 0.25);
    return quantile(std::move(values), 0.75) - first_quartile;
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

namespace {

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("table: bad number '" + s + "'");
    return v;
}

template <typename T>
T parse_integer(const std::string& s) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("table: bad integer '" + s + "'");
    return v;
}

std::string opt_to_string(const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string{};
}

std::optional<std::uint64_t> opt_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_integer<std::uint64_t>(s);
}

const std::vector<std::string>& table_header() {
    static const std::vector<std::string> header = {
        "schema", "row_type", "config_index", "n", "k", "mu", "pc", "selector", "init",
        "budget", "cell_seed", "replicate", "stream_seed", "evaluations_to_all_plateau",
        "evaluations_to_optimum", "total_evaluations", "final_best_fitness", "censored",
        "replicates", "median_evals_to_optimum", "mean_evals_to_optimum",
        "iqr_evals_to_optimum", "median_evals_to_plateau", "censored_count"};
    return header;
}

constexpr std::string_view kTableSchema = "jumpga-table-v1";

} // namespace

AggregateRow aggregate_of(const std::vector<ReplicateRow>& cell_rows) {
    if (cell_rows.empty()) throw std::invalid_argument("aggregate_of: no rows");
    AggregateRow agg;
    const auto& first = cell_rows.front();
    agg.config_index = first.config_index;
    agg.n = first.n;
    agg.k = first.k;
    agg.mu = first.mu;
    agg.pc = first.pc;
    agg.selector = first.selector;
    agg.init = first.init;
    agg.budget = first.budget;
    agg.cell_seed = first.cell_seed;
    agg.replicates = static_cast<int>(cell_rows.size());
    std::vector<double> to_optimum, to_plateau;
    for (const auto& row : cell_rows) {
        to_optimum.push_back(static_cast<double>(
            row.evaluations_to_optimum.value_or(row.budget)));
        to_plateau.push_back(static_cast<double>(
            row.evaluations_to_all_plateau.value_or(row.budget)));
        if (row.censored) ++agg.censored_count;
    }
    agg.median_evals_to_optimum = median(to_optimum);
    agg.mean_evals_to_optimum = 0.0;
    for (double v : to_optimum) agg.mean_evals_to_optimum += v;
    agg.mean_evals_to_optimum /= static_cast<double>(to_optimum.size());
    agg.iqr_evals_to_optimum = interquartile_range(to_optimum);
    agg.median_evals_to_plateau = median(to_plateau);
    return agg;
}

SweepOutput run_sweep(const SweepSpec& spec, int parallelism) {
    spec.validate();
    const auto cells = spec.expand();
    const int reps = spec.replicates;
    const int total = static_cast<int>(cells.size()) * reps;

    std::vector<engine::RunResult> results(total);
    auto run_task = [&](int task) {
        const int cell = task / reps;
        const int rep = task % reps;
        engine::GaConfig config = cells[cell];
        if (spec.trace_first_replicate && rep == 0)
            config.trace_stride = std::max<std::uint64_t>(spec.trace_stride, 1);
        results[task] = engine::run_replicate(config, rep);
    };

    const int workers = std::clamp(parallelism, 1, total);
    if (workers == 1) {
        for (int t = 0; t < total; ++t) run_task(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const int t = next.fetch_add(1);
                    if (t >= total) return;
                    run_task(t);
                }
            });
        for (auto& t : pool) t.join();
    }

    SweepOutput out;
    for (std::size_t cell = 0; cell < cells.size(); ++cell) {
        std::vector<ReplicateRow> cell_rows;
        for (int rep = 0; rep < reps; ++rep) {
            const auto& r = results[cell * reps + rep];
            ReplicateRow row;
            row.config_index = static_cast<int>(cell);
            row.n = cells[cell].spec.n;
            row.k = cells[cell].spec.k;
            row.mu = cells[cell].mu;
            row.pc = cells[cell].crossover_probability;
            row.selector = selection::to_string(cells[cell].pair_selector);
            row.init = engine::to_string(cells[cell].init);
            row.budget = cells[cell].max_evaluations;
            row.cell_seed = cells[cell].seed;
            row.replicate = rep;
            row.stream_seed = r.stream_seed;
            row.evaluations_to_all_plateau = r.evaluations_to_all_plateau;
            row.evaluations_to_optimum = r.evaluations_to_optimum;
            row.total_evaluations = r.total_evaluations;
            row.final_best_fitness = r.final_best_fitness;
            row.censored = r.censored();
            cell_rows.push_back(std::move(row));
        }
        out.table.aggregates.push_back(aggregate_of(cell_rows));
        out.table.rows.insert(out.table.rows.end(), cell_rows.begin(), cell_rows.end());
        if (spec.trace_first_replicate)
            out.traces.push_back({static_cast<int>(cell), results[cell * reps].trajectory});
    }
    return out;
}

std::string to_csv(const ResultTable& table) {
    std::string out = csv::make_row(table_header());
    for (const auto& r : table.rows) {
        out += csv::make_row({std::string(kTableSchema), "replicate",
                              std::to_string(r.config_index), std::to_string(r.n),
                              std::to_string(r.k), std::to_string(r.mu), format_double(r.pc),
                              r.selector, r.init, std::to_string(r.budget),
                              std::to_string(r.cell_seed), std::to_string(r.replicate),
                              std::to_string(r.stream_seed),
                              opt_to_string(r.evaluations_to_all_plateau),
                              opt_to_string(r.evaluations_to_optimum),
                              std::to_string(r.total_evaluations),
                              std::to_string(r.final_best_fitness),
                              r.censored ? "true" : "false", "", "", "", "", "", ""});
    }
    for (const auto& a : table.aggregates) {
        out += csv::make_row({std::string(kTableSchema), "aggregate",
                              std::to_string(a.config_index), std::to_string(a.n),
                              std::to_string(a.k), std::to_string(a.mu), format_double(a.pc),
                              a.selector, a.init, std::to_string(a.budget),
                              std::to_string(a.cell_seed), "", "", "", "", "", "", "",
                              std::to_string(a.replicates),
                              format_double(a.median_evals_to_optimum),
                              format_double(a.mean_evals_to_optimum),
                              format_double(a.iqr_evals_to_optimum),
                              format_double(a.median_evals_to_plateau),
                              std::to_string(a.censored_count)});
    }
    return out;
}

ResultTable table_from_csv(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty() || rows.front() != table_header())
        throw std::invalid_argument("table: missing or unexpected header row");
    ResultTable table;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != table_header().size())
            throw std::invalid_argument("table: wrong field count in data row");
        if (f[0] != kTableSchema)
            throw std::invalid_argument("table: unknown schema '" + f[0] + "'");
        if (f[1] == "replicate") {
            ReplicateRow r;
            r.config_index = parse_integer<int>(f[2]);
            r.n = parse_integer<int>(f[3]);
            r.k = parse_integer<int>(f[4]);
            r.mu = parse_integer<int>(f[5]);
            r.pc = parse_double(f[6]);
            r.selector = f[7];
            r.init = f[8];
            r.budget = parse_integer<std::uint64_t>(f[9]);
            r.cell_seed = parse_integer<std::uint64_t>(f[10]);
            r.replicate = parse_integer<int>(f[11]);
            r.stream_seed = parse_integer<std::uint64_t>(f[12]);
            r.evaluations_to_all_plateau = opt_from_string(f[13]);
            r.evaluations_to_optimum = opt_from_string(f[14]);
            r.total_evaluations = parse_integer<std::uint64_t>(f[15]);
            r.final_best_fitness = parse_integer<int>(f[16]);
            r.censored = f[17] == "true";
            table.rows.push_back(std::move(r));
        } else if (f[1] == "aggregate") {
            AggregateRow a;
            a.config_index = parse_integer<int>(f[2]);
            a.n = parse_integer<int>(f[3]);
            a.k = parse_integer<int>(f[4]);
            a.mu = parse_integer<int>(f[5]);
            a.pc = parse_double(f[6]);
            a.selector = f[7];
            a.init = f[8];
            a.budget = parse_integer<std::uint64_t>(f[9]);
            a.cell_seed = parse_integer<std::uint64_t>(f[10]);
            a.replicates = parse_integer<int>(f[18]);
            a.median_evals_to_optimum = parse_double(f[19]);
            a.mean_evals_to_optimum = parse_double(f[20]);
            a.iqr_evals_to_optimum = parse_double(f[21]);
            a.median_evals_to_plateau = parse_double(f[22]);
            a.censored_count = parse_integer<int>(f[23]);
            table.aggregates.push_back(std::move(a));
        } else {
            throw std::invalid_argument("table: unknown row type '" + f[1] + "'");
        }
    }
    return table;
}

std::string trace_to_csv(const std::vector<engine::TraceRecord>& records) {
    std::string out = csv::make_row(
        {"t", "evaluations", "d", "m", "max_pair_count", "min_fitness", "best_fitness"});
    for (const auto& r : records)
        out += csv::make_row({std::to_string(r.t), std::to_string(r.evaluations),
                              std::to_string(r.d), std::to_string(r.m),
                              std::to_string(r.max_pair_count), std::to_string(r.min_fitness),
                              std::to_string(r.best_fitness)});
    return out;
}

std::string result_json(const engine::GaConfig& config, const engine::RunResult& result) {
    nlohmann::json j;
    j["schema"] = "jumpga-result-v1";
    j["n"] = config.spec.n;
    j["k"] = config.spec.k;
    j["mu"] = config.mu;
    j["pc"] = config.crossover_probability;
    j["selector"] = selection::to_string(config.pair_selector);
    j["init"] = engine::to_string(config.init);
    j["budget"] = config.max_evaluations;
    j["trace_stride"] = config.trace_stride;
    j["seed"] = result.config_seed;
    j["replicate"] = result.replicate_index;
    j["stream_seed"] = result.stream_seed;
    if (result.evaluations_to_all_plateau)
        j["evaluations_to_all_plateau"] = *result.evaluations_to_all_plateau;
    else
        j["evaluations_to_all_plateau"] = nullptr;
    if (result.evaluations_to_optimum)
        j["evaluations_to_optimum"] = *result.evaluations_to_optimum;
    else
        j["evaluations_to_optimum"] = nullptr;
    j["total_evaluations"] = result.total_evaluations;
    j["final_best_fitness"] = result.final_best_fitness;
    j["censored"] = result.censored();
    if (result.running_min_max_pair_probability)
        j["running_min_max_pair_probability"] = *result.running_min_max_pair_probability;
    return j.dump(2) + "\n";
}

ExperimentPreset preset_selection_comparison() {
    SweepSpec spec;
    spec.n = {20, 30};
    spec.k = {3, 4};
    spec.mu = {50};
    spec.pc = {0.5};
    spec.selectors = {selection::PairSelector::furthest(), selection::PairSelector::uniform_pair()};
    spec.init = engine::GaConfig::Init::UniformRandom;
    spec.replicates = 20;
    spec.budget = 100000000ULL;
    spec.seed = 1;
    return {"selection-comparison", std::move(spec)};
}

ExperimentPreset preset_plateau_escape() {
    SweepSpec spec;
    spec.n = {15, 30, 60};
    spec.k = {3};
    spec.mu = {50};
    spec.pc = {0.5};
    spec.selectors = {selection::PairSelector::furthest()};
    spec.init = engine::GaConfig::Init::AllOnPlateau;
    spec.replicates = 20;
    spec.budget = 10000000ULL;
    spec.seed = 1;
    spec.trace_stride = 1;
    spec.trace_first_replicate = true;
    return {"plateau-escape", std::move(spec)};
}

ExperimentPreset preset_hill_climb() {
    SweepSpec spec;
    spec.n = {50, 100, 200};
    spec.k = {3};
    spec.mu = {20};
    spec.pc = {0.5};
    spec.selectors = {selection::PairSelector::furthest()};
    spec.init = engine::GaConfig::Init::UniformRandom;
    spec.replicates = 20;
    spec.budget = 10000000ULL;
    spec.seed = 1;
    return {"hill-climb", std::move(spec)};
}

std::optional<ExperimentPreset> preset_by_name(std::string_view name) {
    if (name == "selection-comparison") return preset_selection_comparison();
    if (name == "plateau-escape") return preset_plateau_escape();
    if (name == "hill-climb") return preset_hill_climb();
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    return {"selection-comparison", "plateau-escape", "hill-climb"};
}

int resolve_parallelism(int requested) {
    if (const char* env = std::getenv("JUMPGA_THREADS")) {
        int v = 0;
        const std::string s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
    }
    return std::max(requested, 1);
}

} // namespace jumpga::harness
