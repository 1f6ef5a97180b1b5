#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <jumpga/csv.hpp>
#include <jumpga/harness.hpp>

using namespace jumpga;

namespace {

harness::SweepSpec tiny_sweep() {
    harness::SweepSpec spec;
    spec.n = {8, 10};
    spec.k = {2};
    spec.mu = {5};
    spec.pc = {0.5};
    spec.selectors = {selection::PairSelector::furthest(), selection::PairSelector::uniform_pair()};
    spec.replicates = 3;
    spec.budget = 30000;
    spec.seed = 11;
    return spec;
}

} // namespace

TEST_CASE("csv quoting and parsing round trip") {
    CHECK(csv::escape_field("plain") == "plain");
    CHECK(csv::escape_field("a,b") == "\"a,b\"");
    CHECK(csv::escape_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::escape_field("line\nbreak") == "\"line\nbreak\"");

    const std::string doc = csv::make_row({"a", "b,c", "d\"e", ""}) + csv::make_row({"1", "", "", "x"});
    const auto rows = csv::parse(doc);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "d\"e", ""});
    CHECK(rows[1] == std::vector<std::string>{"1", "", "", "x"});

    CHECK(csv::parse("a,b\r\nc,d\r\n") ==
          std::vector<std::vector<std::string>>{{"a", "b"}, {"c", "d"}});
    CHECK_THROWS_AS(csv::parse("\"unterminated"), std::invalid_argument);
}

TEST_CASE("property: random tables of awkward fields round-trip through the CSV layer") {
    auto eng = rng::make_engine(99);
    const std::string alphabet = "ab,\"\n\r;x0 ";
    for (int round = 0; round < 200; ++round) {
        const std::size_t columns = 1 + rng::uniform_index(eng, 5);
        std::vector<std::vector<std::string>> rows;
        std::string doc;
        for (std::size_t r = 0; r < 1 + rng::uniform_index(eng, 4); ++r) {
            std::vector<std::string> row;
            for (std::size_t c = 0; c < columns; ++c) {
                std::string field;
                const std::size_t len = rng::uniform_index(eng, 6);
                for (std::size_t i = 0; i < len; ++i)
                    field += alphabet[rng::uniform_index(eng, alphabet.size())];
                // bare CR outside quotes is not representable; quoting handles it
                row.push_back(std::move(field));
            }
            doc += csv::make_row(row);
            rows.push_back(std::move(row));
        }
        CAPTURE(doc);
        CHECK(csv::parse(doc) == rows);
    }
}

TEST_CASE("quantile, median and IQR") {
    CHECK(harness::median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(harness::median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(harness::quantile({1.0, 2.0, 3.0, 4.0}, 0.0) == 1.0);
    CHECK(harness::quantile({1.0, 2.0, 3.0, 4.0}, 1.0) == 4.0);
    CHECK(harness::interquartile_range({1.0, 2.0, 3.0, 4.0, 5.0}) == 2.0);
    CHECK_THROWS_AS(harness::median({}), std::invalid_argument);
}

TEST_CASE("doubles print in shortest round-trip form") {
    CHECK(harness::format_double(0.5) == "0.5");
    CHECK(harness::format_double(12345.0) == "12345");
    const double awkward = 0.1 + 0.2;
    CHECK(std::stod(harness::format_double(awkward)) == awkward);
}

TEST_CASE("sweep produces |grid| x replicates rows plus one aggregate per cell") {
    const auto spec = tiny_sweep();
    const auto output = harness::run_sweep(spec, 1);
    CHECK(output.table.rows.size() == 4 * 3);  // 2 n x 1 k x 1 mu x 1 pc x 2 selectors
    CHECK(output.table.aggregates.size() == 4);
    for (std::size_t cell = 0; cell < 4; ++cell) {
        std::vector<harness::ReplicateRow> cell_rows;
        for (const auto& row : output.table.rows)
            if (row.config_index == static_cast<int>(cell)) cell_rows.push_back(row);
        CHECK(cell_rows.size() == 3);
        CHECK(harness::aggregate_of(cell_rows) == output.table.aggregates[cell]);
    }
}

TEST_CASE("sweep is independent of the parallelism degree") {
    const auto spec = tiny_sweep();
    const auto serial = harness::run_sweep(spec, 1);
    const auto parallel = harness::run_sweep(spec, 5);
    CHECK(serial.table == parallel.table);
}

TEST_CASE("result table round-trips through CSV") {
    const auto output = harness::run_sweep(tiny_sweep(), 2);
    const std::string text = harness::to_csv(output.table);
    const auto parsed = harness::table_from_csv(text);
    CHECK(parsed == output.table);
    CHECK(harness::to_csv(parsed) == text);
    CHECK_THROWS_AS(harness::table_from_csv("not,a,header\n"), std::invalid_argument);
}

TEST_CASE("censored runs are flagged and counted") {
    harness::SweepSpec spec = tiny_sweep();
    spec.n = {30};
    spec.k = {4};
    spec.mu = {5};
    spec.selectors = {selection::PairSelector::uniform_pair()};
    spec.budget = 200;  // far too small to reach the optimum
    spec.replicates = 4;
    const auto output = harness::run_sweep(spec, 1);
    REQUIRE(output.table.aggregates.size() == 1);
    CHECK(output.table.aggregates[0].censored_count == 4);
    CHECK(output.table.aggregates[0].median_evals_to_optimum == 200.0);
    for (const auto& row : output.table.rows) {
        CHECK(row.censored);
        CHECK_FALSE(row.evaluations_to_optimum.has_value());
    }
}

TEST_CASE("plateau-escape style sweep records first-replicate traces") {
    harness::SweepSpec spec = tiny_sweep();
    spec.n = {8};
    spec.selectors = {selection::PairSelector::furthest()};
    spec.init = engine::GaConfig::Init::AllOnPlateau;
    spec.trace_stride = 1;
    spec.trace_first_replicate = true;
    const auto output = harness::run_sweep(spec, 1);
    REQUIRE(output.traces.size() == 1);
    CHECK(output.traces[0].config_index == 0);
    CHECK(output.traces[0].records.size() > 1);
    const std::string text = harness::trace_to_csv(output.traces[0].records);
    CHECK(text.rfind("t,evaluations,d,m,max_pair_count,min_fitness,best_fitness\n", 0) == 0);
}

TEST_CASE("result JSON is flat, schema-tagged and deterministic") {
    engine::GaConfig config;
    config.spec = {8, 2};
    config.mu = 4;
    config.seed = 5;
    config.max_evaluations = 10000;
    const auto result = engine::run(config);
    const std::string a = harness::result_json(config, result);
    const std::string b = harness::result_json(config, engine::run(config));
    CHECK(a == b);
    CHECK(a.find("\"schema\": \"jumpga-result-v1\"") != std::string::npos);
    CHECK(a.find("\"evaluations_to_optimum\"") != std::string::npos);
    CHECK(a.find("running_min_max_pair_probability") == std::string::npos);  // untracked
}

TEST_CASE("presets resolve by name") {
    for (const auto& name : harness::preset_names()) {
        const auto preset = harness::preset_by_name(name);
        REQUIRE(preset.has_value());
        CHECK(preset->name == name);
        CHECK_NOTHROW(preset->spec.validate());
    }
    CHECK_FALSE(harness::preset_by_name("nope").has_value());
    CHECK(harness::preset_by_name("plateau-escape")->spec.trace_first_replicate);
    CHECK(harness::preset_by_name("hill-climb")->spec.mu == std::vector<int>{20});
    CHECK(harness::preset_by_name("selection-comparison")->spec.selectors.size() == 2);
}

TEST_CASE("selection-comparison preset: furthest is not slower, and clearly ahead at k = 4") {
    const auto output = harness::run_preset(harness::preset_selection_comparison(), 2);
    REQUIRE(output.table.aggregates.size() == 8);  // 2 n x 2 k x 2 selectors
    std::map<std::pair<int, int>, std::map<std::string, double>> medians;
    for (const auto& agg : output.table.aggregates) {
        medians[{agg.n, agg.k}][agg.selector] = agg.median_evals_to_optimum;
        CHECK(agg.replicates == 20);
        CHECK(agg.censored_count == 0);
    }
    for (const auto& [cell, by_selector] : medians) {
        REQUIRE(by_selector.size() == 2);
        INFO("n=" << cell.first << " k=" << cell.second);
        if (cell.second == 4)
            CHECK(by_selector.at("furthest") <= by_selector.at("uniform-pair"));
    }
}

TEST_CASE("plateau-escape preset: instant plateau hit, near-flat growth in n") {
    const auto preset = harness::preset_plateau_escape();
    const auto output = harness::run_preset(preset, 2);
    for (const auto& row : output.table.rows) {
        REQUIRE(row.evaluations_to_all_plateau.has_value());
        CHECK(*row.evaluations_to_all_plateau == static_cast<std::uint64_t>(row.mu));
        CHECK_FALSE(row.censored);
    }
    // log-log slope of the optimum-hitting median over n in {15, 30, 60}
    std::map<int, double> median_by_n;
    for (const auto& agg : output.table.aggregates) median_by_n[agg.n] = agg.median_evals_to_optimum;
    REQUIRE(median_by_n.size() == 3);
    const double slope = std::log(median_by_n.at(60) / median_by_n.at(15)) / std::log(60.0 / 15.0);
    INFO("slope " << slope);
    CHECK(slope <= 2.0);
    REQUIRE(output.traces.size() == 3);  // first replicate of each cell
}

TEST_CASE("hill-climb preset: every replicate reaches the plateau, mild growth") {
    const auto output = harness::run_preset(harness::preset_hill_climb(), 2);
    int reached = 0;
    for (const auto& row : output.table.rows) {
        // a run may create the optimum from a still-climbing population and
        // stop with the plateau time legitimately unreached
        CHECK((row.evaluations_to_all_plateau.has_value() ||
               row.evaluations_to_optimum.has_value()));
        if (row.evaluations_to_all_plateau) ++reached;
    }
    CHECK(reached >= static_cast<int>(output.table.rows.size() * 3 / 4));
    std::map<int, double> median_by_n;
    for (const auto& agg : output.table.aggregates) median_by_n[agg.n] = agg.median_evals_to_plateau;
    CHECK(median_by_n.at(200) <= 8.0 * median_by_n.at(50));
}

TEST_CASE("hill-climb cost grows at most ~2.5x when the population doubles") {
    harness::SweepSpec spec;
    spec.n = {100};
    spec.k = {3};
    spec.mu = {20, 40};
    spec.pc = {0.5};
    spec.selectors = {selection::PairSelector::furthest()};
    spec.replicates = 20;
    spec.budget = 10000000ULL;
    spec.seed = 31;
    const auto output = harness::run_sweep(spec, 2);
    std::map<int, double> median_by_mu;
    for (const auto& agg : output.table.aggregates)
        median_by_mu[agg.mu] = agg.median_evals_to_plateau;
    INFO("mu=20: " << median_by_mu.at(20) << ", mu=40: " << median_by_mu.at(40));
    CHECK(median_by_mu.at(40) <= 2.5 * median_by_mu.at(20));
}

TEST_CASE("JUMPGA_THREADS overrides the requested parallelism") {
    unsetenv("JUMPGA_THREADS");
    CHECK(harness::resolve_parallelism(3) == 3);
    CHECK(harness::resolve_parallelism(0) == 1);
    setenv("JUMPGA_THREADS", "7", 1);
    CHECK(harness::resolve_parallelism(3) == 7);
    setenv("JUMPGA_THREADS", "junk", 1);
    CHECK(harness::resolve_parallelism(3) == 3);
    unsetenv("JUMPGA_THREADS");
}

TEST_CASE("sweep spec validation") {
    harness::SweepSpec spec = tiny_sweep();
    spec.k.clear();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = tiny_sweep();
    spec.replicates = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = tiny_sweep();
    spec.budget = 1;  // below mu
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
