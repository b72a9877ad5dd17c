#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fleetopt/bench.hpp"
#include "fleetopt/model_blp.hpp"
#include "fleetopt/model_ilp.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace fleetopt;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("relative gaps come out as expected on knowns") {
    // a roughly quarter-permille heuristic excess
    const auto gap = compute_gap(5364340.8 / 100.0, 5365682.4 / 100.0);
    REQUIRE(gap.has_value());
    CHECK(std::abs(*gap - 0.000250) < 1e-6);

    CHECK(!compute_gap({}, 10.0).has_value());
    CHECK(!compute_gap(10.0, {}).has_value());
    CHECK(compute_gap(0.0, 0.0) == 0.0);
    CHECK(!compute_gap(0.0, 5.0).has_value());  // undefined ratio stays empty
    CHECK(compute_gap(10.0, 10.0) == 0.0);
}

TEST_CASE("a small multi-day suite produces solved, labelled rows") {
    SuiteConfig config;
    config.kind = ModelKind::Blp;
    config.anneal.sweeps = 300;
    config.anneal.restarts = 2;
    GeneratorConfig a;
    a.flights_per_day = 9;
    a.days = 2;
    a.seed = 5;
    GeneratorConfig b;
    b.flights_per_day = 12;
    b.days = 1;
    b.seed = 6;
    config.instances = {a, b};

    const auto rows = run_suite(config);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].label == "(9,4,2)");
    CHECK(rows[1].label == "(12,4,1)");
    CHECK(rows[0].variables == 9 * 4 * 2);
    CHECK(rows[0].constraints == 9 * 2 + 4 * 2);
    for (const BenchRow& row : rows) {
        CHECK(row.error.empty());
        CHECK(row.exact_status == "Optimal");
        CHECK(row.anneal_status == "Feasible");
        REQUIRE(row.exact_cost.has_value());
        REQUIRE(row.anneal_cost.has_value());
        REQUIRE(row.gap.has_value());
        CHECK(*row.gap >= 0.0);  // the heuristic can never beat the optimum
        CHECK(row.exact_time >= 0.0);
        CHECK(row.anneal_time >= 0.0);
    }
}

TEST_CASE("a single-day suite drops the day component from labels") {
    SuiteConfig config;
    config.kind = ModelKind::Ilp;
    config.anneal.sweeps = 300;
    config.anneal.restarts = 2;
    GeneratorConfig gen;
    gen.flights_per_day = 5;
    gen.days = 1;
    gen.seed = 11;
    gen.fleet_spec = {{"A330", 159, 4}, {"B737", 142, 4}};
    config.instances = {gen};

    const auto rows = run_suite(config);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].label == "(5,2)");
    CHECK(rows[0].variables == 5 * 2 + 10 * 2);       // legs plus ground arcs
    CHECK(rows[0].constraints == 5 + 2 + 10 * 2);
    CHECK(rows[0].exact_status == "Optimal");
}

TEST_CASE("report files render statuses, quote labels, and stay reproducible") {
    BenchRow solved;
    solved.label = "(9,4,2)";
    solved.variables = 72;
    solved.constraints = 26;
    solved.exact_cost = 1234.56;
    solved.anneal_cost = 1250.00;
    solved.exact_time = 0.25;
    solved.anneal_time = 1.75;
    solved.gap = compute_gap(solved.exact_cost, solved.anneal_cost);

    BenchRow doomed;
    doomed.label = "(3,1,1)";
    doomed.variables = 3;
    doomed.constraints = 4;
    doomed.exact_status = "Infeasible";
    doomed.anneal_status = "Infeasible";

    SuiteConfig config;
    config.kind = ModelKind::Blp;
    GeneratorConfig a;
    a.flights_per_day = 9;
    a.days = 2;
    GeneratorConfig b;
    b.flights_per_day = 3;
    b.days = 1;
    config.instances = {a, b};

    const auto dir = fresh_dir("fleetopt_bench_report");
    const ReportPaths paths = write_report({solved, doomed}, config, dir);
    CHECK(paths.csv == dir / "bench.csv");
    CHECK(paths.json == dir / "bench.json");
    REQUIRE(paths.plot_data.size() == 4);

    const auto csv = lines_of(slurp(paths.csv));
    REQUIRE(csv.size() == 3);
    CHECK(csv[0] == "label,variables,constraints,exact_cost,anneal_cost,exact_time_s,anneal_time_s,gap");
    CHECK(csv[1] == "\"(9,4,2)\",72,26,1234.56,1250.00,0.2,1.8,0.012506");
    CHECK(csv[2] == "\"(3,1,1)\",3,4,Infeasible,Infeasible,0.0,0.0,");

    const auto parsed = nlohmann::json::parse(slurp(paths.json));
    CHECK(parsed.at("kind") == "blp");
    CHECK(parsed.at("timing") ==
          "wall times cover the solve calls only; instance generation and model build are excluded");
    CHECK(parsed.at("anneal").at("restarts") == 8);
    REQUIRE(parsed.at("instances").size() == 2);
    CHECK(parsed.at("instances")[0].at("flights_per_day") == 9);
    CHECK(parsed.at("instances")[0].at("fleets").size() == 4);

    // cost series skip the row without a cost; time series keep every row
    const auto cost_exact = lines_of(slurp(dir / "cost_exact.dat"));
    REQUIRE(cost_exact.size() == 1);
    CHECK(cost_exact[0] == "18 1234.56");  // 9 flights/day x 2 days
    CHECK(lines_of(slurp(dir / "time_anneal.dat")).size() == 2);

    // a rerun with the same inputs writes the same bytes everywhere
    const auto again = fresh_dir("fleetopt_bench_report_again");
    write_report({solved, doomed}, config, again);
    CHECK(slurp(paths.csv) == slurp(again / "bench.csv"));
    CHECK(slurp(paths.json) == slurp(again / "bench.json"));
    for (const char* name : {"cost_exact.dat", "cost_anneal.dat", "time_exact.dat", "time_anneal.dat"})
        CHECK(slurp(dir / name) == slurp(again / name));
}

TEST_CASE("suite errors are recorded on the row and in the manifest") {
    SuiteConfig config;
    config.kind = ModelKind::Ilp;
    GeneratorConfig bad;
    bad.flights_per_day = 4;
    bad.days = 2;  // two days cannot form a single-day balance model
    bad.seed = 3;
    config.instances = {bad};

    const auto rows = run_suite(config);
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].error.empty());
    CHECK(rows[0].exact_status == "Error");
    CHECK(rows[0].anneal_status == "Error");
    CHECK(!rows[0].exact_cost.has_value());
    CHECK(!rows[0].gap.has_value());

    const auto dir = fresh_dir("fleetopt_bench_error");
    write_report(rows, config, dir);
    const auto parsed = nlohmann::json::parse(slurp(dir / "bench.json"));
    CHECK(parsed.at("instances")[0].contains("error"));
}

TEST_CASE("the default ladder scales sizes and seeds together") {
    const auto blp = default_ladder(ModelKind::Blp, 10);
    REQUIRE(blp.size() == 5);
    const std::vector<int> sizes{46, 92, 184, 276, 368};
    for (std::size_t s = 0; s < blp.size(); ++s) {
        CHECK(blp[s].flights_per_day == sizes[s]);
        CHECK(blp[s].days == 7);
        CHECK(blp[s].seed == 10 + s);
    }
    const auto ilp = default_ladder(ModelKind::Ilp, 4);
    REQUIRE(ilp.size() == 5);
    for (const GeneratorConfig& g : ilp) CHECK(g.days == 1);

    const auto big = default_ladder(ModelKind::Blp, 1, true);
    REQUIRE(big.size() == 8);
    CHECK(big.back().flights_per_day == 3680);
}

TEST_CASE("the timeline export draws one coloured edge per flight") {
    const Instance small = oracle::make_instance(
        {oracle::fleet(0, "A", 150, 1), oracle::fleet(1, "B", 180, 1)},
        {oracle::flight(1, "SYD", "MEL", 400, 500, 150, 1)}, {{100, 200}});
    Assignment a;
    a.fleet_of[1] = 0;

    const auto dir = fresh_dir("fleetopt_dot");
    export_timeline_dot(small, a, dir / "one.dot");
    const std::string dot = slurp(dir / "one.dot");
    CHECK(dot.rfind("digraph schedule {", 0) == 0);
    CHECK(dot.find("\"MEL\";") != std::string::npos);
    CHECK(dot.find("\"SYD\";") != std::string::npos);
    CHECK(dot.find("\"SYD\" -> \"MEL\" [label=\"1@06:40:00->08:20:00\"") != std::string::npos);

    // reassigning the flight changes exactly the edge line, via its colour
    a.fleet_of[1] = 1;
    export_timeline_dot(small, a, dir / "two.dot");
    const auto before = lines_of(dot);
    const auto after = lines_of(slurp(dir / "two.dot"));
    REQUIRE(before.size() == after.size());
    int differing = 0;
    for (std::size_t i = 0; i < before.size(); ++i)
        if (before[i] != after[i]) {
            ++differing;
            CHECK(before[i].find("color=") != std::string::npos);
        }
    CHECK(differing == 1);

    SUBCASE("a generated day renders every airport and flight") {
        GeneratorConfig gen;
        gen.flights_per_day = 46;
        gen.days = 2;
        const Instance in = generate_instance(gen);
        const SolveReport report = solve_blp_exact(in, build_blp(in));
        REQUIRE(report.status == SolveStatus::Optimal);

        export_timeline_dot(in, *report.assignment, dir / "day.dot", 2);
        const auto day_lines = lines_of(slurp(dir / "day.dot"));
        int edges = 0;
        for (const std::string& line : day_lines)
            if (line.find(" -> ") != std::string::npos) ++edges;
        CHECK(edges == 46);  // only day 2, not all 92 flights

        // the full dump shows both days
        export_timeline_dot(in, *report.assignment, dir / "all.dot");
        const auto all_lines = lines_of(slurp(dir / "all.dot"));
        int all_edges = 0;
        for (const std::string& line : all_lines)
            if (line.find(" -> ") != std::string::npos) ++all_edges;
        CHECK(all_edges == 92);
    }

    SUBCASE("an incomplete assignment is a caller bug") {
        Assignment empty;
        CHECK_THROWS_AS(export_timeline_dot(small, empty, dir / "bad.dot"),
                        std::invalid_argument);
    }
}
