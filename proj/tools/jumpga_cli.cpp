#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include <jumpga/csv.hpp>
#include <jumpga/engine.hpp>
#include <jumpga/harness.hpp>
#include <jumpga/oracles.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;

// Flat key=value config file with '#' comments. Values act as defaults:
// a key is ignored when the matching flag was given on the command line.
class ConfigKeys {
public:
    template <typename T>
    void bind(const std::string& key, T& target) {
        setters_[key] = [&target](const std::string& value) { target = parse_value<T>(value); };
    }

    std::set<std::string> apply_file(const std::string& path, const CLI::App* cmd) const {
        std::ifstream f(path);
        if (!f) throw std::invalid_argument("cannot open config file: " + path);
        std::set<std::string> applied;
        std::string line;
        while (std::getline(f, line)) {
            const std::string trimmed = trim(line);
            if (trimmed.empty() || trimmed[0] == '#') continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config: expected key=value, got '" + trimmed + "'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            const auto it = setters_.find(key);
            if (it == setters_.end())
                throw std::invalid_argument("config: unknown key '" + key + "'");
            if (cmd->count("--" + key) > 0) continue;  // command line wins
            it->second(value);
            applied.insert(key);
        }
        return applied;
    }

private:
    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return "";
        const auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    }

    template <typename T>
    static T parse_value(const std::string& value) {
        if constexpr (std::is_same_v<T, std::string>) {
            return value;
        } else if constexpr (std::is_same_v<T, std::vector<int>> ||
                             std::is_same_v<T, std::vector<double>> ||
                             std::is_same_v<T, std::vector<std::string>>) {
            T out;
            std::size_t start = 0;
            while (start <= value.size()) {
                const auto comma = value.find(',', start);
                const std::string part =
                    value.substr(start, comma == std::string::npos ? comma : comma - start);
                out.push_back(parse_value<typename T::value_type>(part));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            return out;
        } else {
            T v{};
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc{} || ptr != value.data() + value.size())
                throw std::invalid_argument("config: bad value '" + value + "'");
            return v;
        }
    }

    std::map<std::string, std::function<void(const std::string&)>> setters_;
};

struct RunOptions {
    int n = 20;
    int k = 2;
    int mu = 10;
    double pc = 0.5;
    std::string selector = "furthest";
    std::string init = "random";
    std::uint64_t seed = 1;
    std::uint64_t budget = 1000000;
    std::uint64_t trace_stride = 0;
    bool track_min_pfu = false;
    std::string out;
};

struct SweepOptions {
    std::string preset;
    std::vector<int> n;
    std::vector<int> k;
    std::vector<int> mu;
    std::vector<double> pc;
    std::vector<std::string> selectors;
    std::string init = "random";
    int replicates = 0;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
    int parallel = 1;
    std::string out;
};

struct ValidateOptions {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string out;
};

void add_run_options(CLI::App* cmd, RunOptions& opt, ConfigKeys& keys, std::string& config_path) {
    cmd->add_option("--n", opt.n, "problem dimension");
    cmd->add_option("--k", opt.k, "jump width");
    cmd->add_option("--mu", opt.mu, "population size");
    cmd->add_option("--pc", opt.pc, "crossover probability");
    cmd->add_option("--selector", opt.selector,
                    "uniform-pair | furthest | tournament:<l> | powerlaw:<beta>");
    cmd->add_option("--init", opt.init, "random | plateau");
    cmd->add_option("--seed", opt.seed, "base seed");
    cmd->add_option("--budget", opt.budget, "evaluation budget");
    cmd->add_option("--trace-stride", opt.trace_stride, "trajectory sampling period (0 = off)");
    cmd->add_flag("--track-min-pfu", opt.track_min_pfu,
                  "track the running minimum of the max-distance-pair selection probability");
    cmd->add_option("--out", opt.out, "output file (stdout when omitted)");
    cmd->add_option("--config", config_path, "flat key=value config file, '#' comments");
    keys.bind("n", opt.n);
    keys.bind("k", opt.k);
    keys.bind("mu", opt.mu);
    keys.bind("pc", opt.pc);
    keys.bind("selector", opt.selector);
    keys.bind("init", opt.init);
    keys.bind("seed", opt.seed);
    keys.bind("budget", opt.budget);
    keys.bind("trace-stride", opt.trace_stride);
    keys.bind("out", opt.out);
}

jumpga::engine::GaConfig config_from(const RunOptions& opt) {
    jumpga::engine::GaConfig config;
    config.spec = {opt.n, opt.k};
    config.mu = opt.mu;
    config.crossover_probability = opt.pc;
    config.pair_selector = jumpga::selection::parse_pair_selector(opt.selector);
    config.init = jumpga::engine::parse_init(opt.init);
    config.seed = opt.seed;
    config.max_evaluations = opt.budget;
    config.trace_stride = opt.trace_stride;
    config.track_min_max_pair_probability = opt.track_min_pfu;
    config.validate();
    for (const auto& w : config.warnings()) std::cerr << "warning: " << w << "\n";
    return config;
}

/// Primary outputs are byte-deterministic; wall-clock data goes to a sidecar.
void emit(const std::string& content, const std::string& out_path,
          std::chrono::steady_clock::time_point started) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        f << content;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    std::ofstream meta(out_path + ".meta");
    meta << "written=" << stamp << "\n" << "elapsed_ms=" << elapsed << "\n";
}

int cmd_run(const RunOptions& opt, bool as_trace) {
    const auto started = std::chrono::steady_clock::now();
    RunOptions effective = opt;
    if (as_trace && effective.trace_stride == 0) effective.trace_stride = 1;
    const auto config = config_from(effective);
    const auto result = jumpga::engine::run(config);
    if (as_trace)
        emit(jumpga::harness::trace_to_csv(result.trajectory), opt.out, started);
    else
        emit(jumpga::harness::result_json(config, result), opt.out, started);
    return kExitOk;
}

int cmd_sweep(const SweepOptions& opt, const CLI::App* cmd,
              const std::set<std::string>& config_keys) {
    const auto started = std::chrono::steady_clock::now();
    jumpga::harness::SweepSpec spec;
    bool have_preset = false;
    if (!opt.preset.empty()) {
        auto preset = jumpga::harness::preset_by_name(opt.preset);
        if (!preset) {
            std::cerr << "unknown preset '" << opt.preset << "'; available:";
            for (const auto& name : jumpga::harness::preset_names()) std::cerr << " " << name;
            std::cerr << "\n";
            return kExitUsage;
        }
        spec = preset->spec;
        have_preset = true;
    }
    // precedence: command line > config file > preset defaults
    auto provided = [&](const std::string& key) {
        return cmd->count("--" + key) > 0 || config_keys.count(key) > 0;
    };
    if (!have_preset || provided("n")) spec.n = opt.n;
    if (!have_preset || provided("k")) spec.k = opt.k;
    if (!have_preset || provided("mu")) spec.mu = opt.mu;
    if (!have_preset || provided("pc")) spec.pc = opt.pc;
    if (!have_preset || provided("selector")) {
        spec.selectors.clear();
        for (const auto& s : opt.selectors)
            spec.selectors.push_back(jumpga::selection::parse_pair_selector(s));
    }
    if (!have_preset || provided("init")) spec.init = jumpga::engine::parse_init(opt.init);
    if (!have_preset || provided("replicates")) spec.replicates = opt.replicates;
    if (!have_preset || provided("budget")) spec.budget = opt.budget;
    if (!have_preset || provided("seed")) spec.seed = opt.seed;
    spec.validate();

    const int parallelism = jumpga::harness::resolve_parallelism(opt.parallel);
    const auto output = jumpga::harness::run_sweep(spec, parallelism);
    emit(jumpga::harness::to_csv(output.table), opt.out, started);
    if (!opt.out.empty()) {
        for (const auto& trace : output.traces) {
            std::ofstream f(opt.out + "-trace-cell" + std::to_string(trace.config_index) + ".csv",
                            std::ios::binary);
            f << jumpga::harness::trace_to_csv(trace.records);
        }
    }
    return kExitOk;
}

int cmd_validate(const ValidateOptions& opt) {
    const auto started = std::chrono::steady_clock::now();
    const auto rows = jumpga::oracles::run_validation(opt.trials, opt.seed);
    std::string out = jumpga::csv::make_row({"check", "detail", "bound", "observed", "slack", "pass"});
    bool all_pass = true;
    for (const auto& row : rows) {
        out += jumpga::csv::make_row({row.check, row.detail,
                                      jumpga::harness::format_double(row.bound),
                                      jumpga::harness::format_double(row.observed),
                                      jumpga::harness::format_double(row.slack),
                                      row.pass ? "true" : "false"});
        all_pass = all_pass && row.pass;
    }
    emit(out, opt.out, started);
    return all_pass ? kExitOk : kExitValidationFailure;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"steady-state (mu+1) GA on Jump_k with distance-based parent selection"};
    app.require_subcommand(1);

    RunOptions run_opt;
    ConfigKeys run_keys;
    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "single run, JSON result");
    add_run_options(run_cmd, run_opt, run_keys, run_config);

    RunOptions trace_opt;
    ConfigKeys trace_keys;
    std::string trace_config;
    auto* trace_cmd = app.add_subcommand("trace", "single run, per-sample diversity CSV");
    add_run_options(trace_cmd, trace_opt, trace_keys, trace_config);

    SweepOptions sweep_opt;
    ConfigKeys sweep_keys;
    std::string sweep_config;
    auto* sweep_cmd = app.add_subcommand("sweep", "grid of configs, result table CSV");
    sweep_cmd->add_option("--preset", sweep_opt.preset,
                          "selection-comparison | plateau-escape | hill-climb");
    sweep_cmd->add_option("--n", sweep_opt.n, "dimensions")->delimiter(',');
    sweep_cmd->add_option("--k", sweep_opt.k, "jump widths")->delimiter(',');
    sweep_cmd->add_option("--mu", sweep_opt.mu, "population sizes")->delimiter(',');
    sweep_cmd->add_option("--pc", sweep_opt.pc, "crossover probabilities")->delimiter(',');
    sweep_cmd->add_option("--selector", sweep_opt.selectors, "selector list")->delimiter(',');
    sweep_cmd->add_option("--init", sweep_opt.init, "random | plateau");
    sweep_cmd->add_option("--replicates", sweep_opt.replicates, "replicates per cell");
    sweep_cmd->add_option("--budget", sweep_opt.budget, "evaluation budget per run");
    sweep_cmd->add_option("--seed", sweep_opt.seed, "base seed");
    sweep_cmd->add_option("--parallel", sweep_opt.parallel,
                          "worker threads (JUMPGA_THREADS overrides)");
    sweep_cmd->add_option("--out", sweep_opt.out, "output CSV (stdout when omitted)");
    sweep_cmd->add_option("--config", sweep_config, "flat key=value config file, '#' comments");
    sweep_keys.bind("preset", sweep_opt.preset);
    sweep_keys.bind("n", sweep_opt.n);
    sweep_keys.bind("k", sweep_opt.k);
    sweep_keys.bind("mu", sweep_opt.mu);
    sweep_keys.bind("pc", sweep_opt.pc);
    sweep_keys.bind("selector", sweep_opt.selectors);
    sweep_keys.bind("init", sweep_opt.init);
    sweep_keys.bind("replicates", sweep_opt.replicates);
    sweep_keys.bind("budget", sweep_opt.budget);
    sweep_keys.bind("seed", sweep_opt.seed);
    sweep_keys.bind("parallel", sweep_opt.parallel);
    sweep_keys.bind("out", sweep_opt.out);

    ValidateOptions validate_opt;
    auto* validate_cmd = app.add_subcommand("validate", "oracle suite, pass/fail CSV");
    validate_cmd->add_option("--trials", validate_opt.trials, "Monte Carlo trials per check");
    validate_cmd->add_option("--seed", validate_opt.seed, "base seed");
    validate_cmd->add_option("--out", validate_opt.out, "output CSV (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) {
            if (!run_config.empty()) run_keys.apply_file(run_config, run_cmd);
            return cmd_run(run_opt, false);
        }
        if (trace_cmd->parsed()) {
            if (!trace_config.empty()) trace_keys.apply_file(trace_config, trace_cmd);
            return cmd_run(trace_opt, true);
        }
        if (sweep_cmd->parsed()) {
            std::set<std::string> applied;
            if (!sweep_config.empty()) applied = sweep_keys.apply_file(sweep_config, sweep_cmd);
            return cmd_sweep(sweep_opt, sweep_cmd, applied);
        }
        if (validate_cmd->parsed()) return cmd_validate(validate_opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidationFailure;
    }
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
