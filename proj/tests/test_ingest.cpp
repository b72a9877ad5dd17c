#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "fleetopt/exact.hpp"
#include "fleetopt/ingest.hpp"
#include "fleetopt/model_blp.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace fleetopt;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("fleetopt_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

// The published sample data: four fleet types plus the day-1 flights.
const char* kFleetCsv =
    "fleet,capacity,available\n"
    "A330,159,10\n"
    "A220,192,15\n"
    "B737,142,15\n"
    "B717,165,8\n";

}  // namespace

TEST_CASE("fleet file parses into the four sample types") {
    const fs::path dir = fresh_dir("fleet_table");
    write_file(dir / "fleet.csv", kFleetCsv);
    write_file(dir / "schedule.csv",
               "flight,origin,departure,destination,arrival,passengers,day\n"
               "11111,SYD,06:15:00,MEL,07:20:00,157,1\n");
    write_file(dir / "cost.csv",
               "flight,from,to,fleet,total_cost\n"
               "11111,SYD,MEL,A330,4690.40\n"
               "11111,SYD,MEL,A220,4800.00\n"
               "11111,SYD,MEL,B737,4500.10\n"
               "11111,SYD,MEL,B717,4700.99\n");
    const Instance in =
        load_instance(dir / "fleet.csv", dir / "schedule.csv", dir / "cost.csv", 1.0);
    REQUIRE(in.fleets.size() == 4);
    CHECK(in.fleets[0].name == "A330");
    CHECK(in.fleets[0].capacity == 159);
    CHECK(in.fleets[0].available == 10);
    CHECK(in.fleets[3].name == "B717");
    REQUIRE(in.flights.size() == 1);
    CHECK(in.flights[0].departure == 6 * 60 + 15);
    CHECK(in.flights[0].arrival == 7 * 60 + 20);
    CHECK(in.flights[0].demand == 157);
    CHECK(in.costs.at(0, 0) == 469040);
    CHECK(in.costs.at(0, 2) == 450010);
}

TEST_CASE("schedule times accept both 24-hour and afternoon shorthand") {
    CHECK(parse_schedule_time("06:15:00") == 375);
    CHECK(parse_schedule_time("6:15:00") == 375);    // zero-pad optional at/after 6
    CHECK(parse_schedule_time("22:25:00") == 1345);
    // the published single-day schedule follows 11:30 departures with
    // "1:00:00" legs, so a bare small hour means afternoon
    CHECK(parse_schedule_time("1:00:00") == 13 * 60);
    CHECK(parse_schedule_time("2:40:00") == 14 * 60 + 40);
    // an explicit leading zero is literal night-time
    CHECK(parse_schedule_time("01:00:00") == 60);
    CHECK(format_schedule_time(13 * 60) == "13:00:00");
    CHECK(format_schedule_time(375) == "06:15:00");
    CHECK_THROWS_AS(parse_schedule_time("25:00:00"), ModelError);
    CHECK_THROWS_AS(parse_schedule_time("10:61:00"), ModelError);
    CHECK_THROWS_AS(parse_schedule_time("10:00:30"), ModelError);
    CHECK_THROWS_AS(parse_schedule_time("10:00"), ModelError);
}

TEST_CASE("money parses to exact cents and formats back") {
    CHECK(parse_money("4690.40") == 469040);
    CHECK(parse_money("1151514") == 115151400);
    CHECK(parse_money("0.5") == 50);
    CHECK(format_money(469040) == "4690.40");
    CHECK(format_money(0) == "0.00");
    CHECK(format_money(-12) == "-0.12");
    CHECK(parse_money(format_money(123456789)) == 123456789);
    CHECK_THROWS_AS(parse_money("4690.401"), ModelError);
    CHECK_THROWS_AS(parse_money("12a"), ModelError);
}

TEST_CASE("empty schedule still loads and solves to zero") {
    const fs::path dir = fresh_dir("empty_schedule");
    write_file(dir / "fleet.csv", kFleetCsv);
    write_file(dir / "schedule.csv",
               "flight,origin,departure,destination,arrival,passengers,day\n");
    write_file(dir / "cost.csv", "flight,from,to,fleet,total_cost\n");
    const Instance in =
        load_instance(dir / "fleet.csv", dir / "schedule.csv", dir / "cost.csv", 1.0);
    CHECK(in.flights.empty());
    const SolveReport report = solve_blp_exact(in, build_blp(in));
    CHECK(report.status == SolveStatus::Optimal);
    CHECK(report.objective == 0.0);
}

TEST_CASE("save then load reproduces the instance bit for bit") {
    for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
        GeneratorConfig config;
        config.flights_per_day = 9;
        config.days = 2;
        config.seed = seed;
        const Instance original = generate_instance(config);
        const fs::path dir = fresh_dir("roundtrip_" + std::to_string(seed));
        save_instance(original, dir);
        const Instance reloaded = load_instance_dir(dir);
        CHECK(reloaded == original);
    }
}

TEST_CASE("generator is a deterministic function of the seed") {
    GeneratorConfig config;
    config.flights_per_day = 12;
    config.days = 3;
    config.seed = 99;
    const Instance first = generate_instance(config);
    CHECK(generate_instance(config) == first);
    config.seed = 100;
    CHECK(!(generate_instance(config) == first));
}

TEST_CASE("generated instances respect the declared sampling ranges") {
    GeneratorConfig config;
    config.flights_per_day = 40;
    config.days = 2;
    config.seed = 5;
    config.demand_range = {100, 210};
    const Instance in = generate_instance(config);

    for (int day : in.days) {
        int count = 0;
        for (const Flight& f : in.flights) count += f.day == day;
        CHECK(count == config.flights_per_day);
    }
    for (const Flight& f : in.flights) {
        CHECK(f.departure >= 6 * 60);
        CHECK(f.departure <= 22 * 60);
        CHECK(f.departure % 5 == 0);
        CHECK(f.demand >= 100);
        CHECK(f.demand <= 210);
        CHECK(f.origin != f.destination);
    }
    for (std::size_t i = 0; i < in.flights.size(); ++i)
        for (std::size_t j = 0; j < in.fleets.size(); ++j) {
            CHECK(in.costs.at(i, j) >= config.cost_range.first);
            CHECK(in.costs.at(i, j) <= config.cost_range.second);
        }
}

TEST_CASE("generator rejects a single-airport network") {
    GeneratorConfig config;
    config.airports = {"SYD"};
    CHECK_THROWS_AS(generate_instance(config), ModelError);
}

TEST_CASE("ladder-size configs produce the published model dimensions") {
    GeneratorConfig config;
    config.flights_per_day = 46;
    config.days = 7;
    const BlpModel small = build_blp(generate_instance(config));
    CHECK(small.variable_count == 1288);
    CHECK(small.constraint_count == 350);

    config.flights_per_day = 92;
    const BlpModel medium = build_blp(generate_instance(config));
    CHECK(medium.variable_count == 2576);
    CHECK(medium.constraint_count == 672);
}

TEST_CASE("manifest records the default mismatch weight") {
    GeneratorConfig config;
    config.flights_per_day = 4;
    config.days = 1;
    const Instance in = generate_instance(config);
    const fs::path dir = fresh_dir("manifest");
    const SavedPaths paths = save_instance(in, dir);
    std::ifstream manifest(paths.manifest);
    const nlohmann::json doc = nlohmann::json::parse(manifest);
    CHECK(doc.at("lambda").get<double>() == 1.0);
    CHECK(doc.at("seed").get<std::uint64_t>() == config.seed);
    CHECK(doc.at("flights_per_day").get<int>() == 4);
    CHECK(doc.at("days").get<int>() == 1);
    CHECK(doc.at("fleet_count").get<int>() == 4);
}

TEST_CASE("load failures name the offending row") {
    const fs::path dir = fresh_dir("load_errors");
    write_file(dir / "fleet.csv", kFleetCsv);
    write_file(dir / "schedule.csv",
               "flight,origin,departure,destination,arrival,passengers,day\n"
               "11111,SYD,06:15:00,MEL,07:20:00,157,1\n");

    SUBCASE("missing cost pair") {
        write_file(dir / "cost.csv",
                   "flight,from,to,fleet,total_cost\n"
                   "11111,SYD,MEL,A330,4690.40\n");  // other three fleets absent
        try {
            load_instance(dir / "fleet.csv", dir / "schedule.csv", dir / "cost.csv", 1.0);
            FAIL("expected a model error");
        } catch (const ModelError& e) {
            const std::string what = e.what();
            CHECK(what.find("11111") != std::string::npos);
        }
    }

    SUBCASE("unknown fleet name") {
        write_file(dir / "cost.csv",
                   "flight,from,to,fleet,total_cost\n"
                   "11111,SYD,MEL,A350,4690.40\n");
        CHECK_THROWS_AS(
            load_instance(dir / "fleet.csv", dir / "schedule.csv", dir / "cost.csv", 1.0),
            ModelError);
    }

    SUBCASE("duplicate flight id") {
        write_file(dir / "schedule.csv",
                   "flight,origin,departure,destination,arrival,passengers,day\n"
                   "11111,SYD,06:15:00,MEL,07:20:00,157,1\n"
                   "11111,MEL,09:15:00,SYD,10:20:00,140,1\n");
        write_file(dir / "cost.csv",
                   "flight,from,to,fleet,total_cost\n"
                   "11111,SYD,MEL,A330,4690.40\n"
                   "11111,SYD,MEL,A220,4800.00\n"
                   "11111,SYD,MEL,B737,4500.10\n"
                   "11111,SYD,MEL,B717,4700.99\n");
        CHECK_THROWS_AS(
            load_instance(dir / "fleet.csv", dir / "schedule.csv", dir / "cost.csv", 1.0),
            ModelError);
    }

    SUBCASE("unreadable file") {
        CHECK_THROWS_AS(
            load_instance(dir / "nope.csv", dir / "schedule.csv", dir / "cost.csv", 1.0),
            IoError);
    }
}

TEST_CASE("default fleet mix matches the sample table at 46 flights per day") {
    const auto spec = default_fleet_spec(46);
    REQUIRE(spec.size() == 4);
    CHECK(spec[0].name == "A330");
    CHECK(spec[0].capacity == 159);
    CHECK(spec[0].available == 10);
    CHECK(spec[1].name == "A220");
    CHECK(spec[1].capacity == 192);
    CHECK(spec[1].available == 15);
    CHECK(spec[2].name == "B737");
    CHECK(spec[2].available == 15);
    CHECK(spec[3].name == "B717");
    CHECK(spec[3].available == 8);
    // availability scales so larger programs stay seatable
    const auto big = default_fleet_spec(92);
    CHECK(big[0].available == 20);
}
