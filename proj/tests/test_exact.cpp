#include <cmath>

#include "doctest.h"
#include "fleetopt/exact.hpp"
#include "fleetopt/ingest.hpp"
#include "fleetopt/model_blp.hpp"
#include "fleetopt/model_ilp.hpp"
#include "oracles.hpp"

using namespace fleetopt;

namespace {

Cents objective_in_cents(const SolveReport& report) {
    return std::llround(report.objective * 100.0);
}

}  // namespace

TEST_CASE("a capacity-tight day routes the overflow onto the dearer fleet") {
    // Two identical flights, cheap fleet has a single aircraft: one flight
    // must pay the 5-cent row, so the optimum is 1 + 5.
    const Instance in = oracle::make_instance(
        {oracle::fleet(0, "A", 150, 1), oracle::fleet(1, "B", 150, 2)},
        {oracle::flight(1, "SYD", "MEL", 400, 500, 150, 1),
         oracle::flight(2, "SYD", "MEL", 410, 510, 150, 1)},
        {{1, 5}, {1, 5}}, 0.0);
    const SolveReport report = solve_blp_exact(in, build_blp(in));
    REQUIRE(report.status == SolveStatus::Optimal);
    CHECK(objective_in_cents(report) == 6);
    CHECK(report.bound == report.objective);
}

TEST_CASE("with headroom everywhere each flight takes its cheapest row") {
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        Instance in = oracle::random_toy(seed, {});
        for (FleetType& f : in.fleets) f.available = static_cast<int>(in.flights.size());
        const SolveReport report = solve_blp_exact(in, build_blp(in));
        REQUIRE(report.status == SolveStatus::Optimal);

        Cents cheapest_sum = 0;
        for (std::size_t i = 0; i < in.flights.size(); ++i) {
            Cents best = std::numeric_limits<Cents>::max();
            for (std::size_t j = 0; j < in.fleets.size(); ++j)
                best = std::min(best, effective_cost_cents(in, i, static_cast<int>(j)));
            cheapest_sum += best;
        }
        CHECK(objective_in_cents(report) == cheapest_sum);
    }
}

TEST_CASE("the day solver matches exhaustive enumeration") {
    oracle::ToyLimits limits;
    limits.max_flights_per_day = 5;
    limits.max_days = 2;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Instance in = oracle::random_toy(seed, limits);
        const SolveReport report = solve_blp_exact(in, build_blp(in));
        const auto brute = oracle::enumerate_blp(in);
        if (!brute.best) {
            CHECK(report.status == SolveStatus::Infeasible);
            CHECK(!report.assignment.has_value());
            continue;
        }
        REQUIRE(report.status == SolveStatus::Optimal);
        CHECK(objective_in_cents(report) == *brute.best);
        REQUIRE(report.assignment.has_value());
        CHECK(check_feasibility(in, *report.assignment, ModelKind::Blp).empty());
        CHECK(evaluate_objective_cents(in, *report.assignment) == *brute.best);
    }
}

TEST_CASE("the optimality certificate passes solver output and flags a bad swap") {
    const Instance in = oracle::make_instance(
        {oracle::fleet(0, "A", 150, 1), oracle::fleet(1, "B", 150, 1)},
        {oracle::flight(1, "SYD", "MEL", 400, 500, 150, 1),
         oracle::flight(2, "MEL", "SYD", 600, 700, 150, 1)},
        {{0, 100}, {5, 6}}, 0.0);
    const BlpModel model = build_blp(in);
    REQUIRE(model.day_problems.size() == 1);

    const SolveReport report = solve_blp_exact(in, model);
    REQUIRE(report.status == SolveStatus::Optimal);
    CHECK(verify_day_optimality(model.day_problems[0], *report.assignment));

    Assignment swapped;  // costs 100 + 5 instead of 0 + 6
    swapped.fleet_of[1] = 1;
    swapped.fleet_of[2] = 0;
    CHECK(!verify_day_optimality(model.day_problems[0], swapped));
}

TEST_CASE("certificate sweep over random optimal day solutions") {
    oracle::ToyLimits limits;
    limits.max_days = 1;
    for (std::uint64_t seed = 60; seed < 80; ++seed) {
        const Instance in = oracle::random_toy(seed, limits);
        const BlpModel model = build_blp(in);
        const SolveReport report = solve_blp_exact(in, model);
        if (report.status != SolveStatus::Optimal) continue;
        CHECK(verify_day_optimality(model.day_problems[0], *report.assignment));
    }
}

TEST_CASE("an over-subscribed day is reported infeasible") {
    const Instance in = oracle::make_instance(
        {oracle::fleet(0, "A", 150, 1)},
        {oracle::flight(1, "SYD", "MEL", 400, 500, 150, 1),
         oracle::flight(2, "SYD", "MEL", 410, 510, 150, 1)},
        {{100}, {100}});
    const SolveReport report = solve_blp_exact(in, build_blp(in));
    CHECK(report.status == SolveStatus::Infeasible);
    CHECK(!report.assignment.has_value());
}

TEST_CASE("an empty schedule is trivially optimal at zero cost") {
    const Instance in = oracle::make_instance({oracle::fleet(0, "A", 150, 1)}, {}, {});
    const SolveReport report = solve_blp_exact(in, build_blp(in));
    REQUIRE(report.status == SolveStatus::Optimal);
    CHECK(report.objective == 0.0);
    REQUIRE(report.assignment.has_value());
    CHECK(report.assignment->fleet_of.empty());
}

TEST_CASE("repeated solves of one instance give identical assignments") {
    // equal-cost columns make ties everywhere; the solver must still be
    // reproducible run to run
    const Instance in = oracle::make_instance(
        {oracle::fleet(0, "A", 150, 2), oracle::fleet(1, "B", 150, 2)},
        {oracle::flight(1, "SYD", "MEL", 400, 500, 150, 1),
         oracle::flight(2, "MEL", "SYD", 600, 700, 150, 1)},
        {{7, 7}, {7, 7}}, 0.0);
    const BlpModel model = build_blp(in);
    const SolveReport first = solve_blp_exact(in, model);
    const SolveReport second = solve_blp_exact(in, model);
    REQUIRE(first.status == SolveStatus::Optimal);
    REQUIRE(second.status == SolveStatus::Optimal);
    CHECK(*first.assignment == *second.assignment);
}

TEST_CASE("balance solver handles one flight end to end") {
    const Instance in = oracle::make_instance(
        {oracle::fleet(0, "A", 150, 1)},
        {oracle::flight(1, "SYD", "MEL", 400, 500, 150, 1)}, {{2500}});
    const SolveReport report = solve_ilp_exact(in, build_ilp(in));
    REQUIRE(report.status == SolveStatus::Optimal);
    CHECK(objective_in_cents(report) == 2500);
    REQUIRE(report.assignment.has_value());
    CHECK(report.assignment->fleet_of.at(1) == 0);
    CHECK(report.assignment->grounded.has_value());
    CHECK(check_feasibility(in, *report.assignment, ModelKind::Ilp).empty());
}

TEST_CASE("no aircraft anywhere means no feasible balance solution") {
    const Instance in = oracle::make_instance(
        {oracle::fleet(0, "A", 150, 0), oracle::fleet(1, "B", 180, 0)},
        {oracle::flight(1, "SYD", "MEL", 400, 500, 150, 1)}, {{2500, 2600}});
    const SolveReport report = solve_ilp_exact(in, build_ilp(in));
    CHECK(report.status == SolveStatus::Infeasible);
    CHECK(!report.assignment.has_value());
}

TEST_CASE("branch and bound matches placement enumeration on small days") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Instance in = oracle::random_ilp_toy(seed);
        const SolveReport report = solve_ilp_exact(in, build_ilp(in));
        const auto brute = oracle::enumerate_ilp(in);
        if (!brute.best) {
            CHECK(report.status == SolveStatus::Infeasible);
            continue;
        }
        REQUIRE(report.status == SolveStatus::Optimal);
        CHECK(objective_in_cents(report) == *brute.best);
        REQUIRE(report.assignment.has_value());
        CHECK(check_feasibility(in, *report.assignment, ModelKind::Ilp).empty());
        CHECK(evaluate_objective_cents(in, *report.assignment) == *brute.best);
    }
}

TEST_CASE("branch statistics describe a sane search") {
    const Instance in = oracle::random_ilp_toy(5, 6, 3, 3);
    BranchStats stats;
    const SolveReport report = solve_ilp_exact(in, build_ilp(in), {}, &stats);
    if (report.status == SolveStatus::Optimal) {
        CHECK(stats.nodes >= 1);
        REQUIRE(!stats.incumbent_history.empty());
        for (std::size_t k = 1; k < stats.incumbent_history.size(); ++k)
            CHECK(stats.incumbent_history[k] < stats.incumbent_history[k - 1]);
        CHECK(to_currency(stats.incumbent_history.back()) == report.objective);
    }
}

TEST_CASE("exhaustion agrees with the solvers and counts every candidate") {
    const Instance one = oracle::make_instance(
        {oracle::fleet(0, "A", 150, 1)},
        {oracle::flight(1, "SYD", "MEL", 400, 500, 150, 1)}, {{2500}});
    BruteStats stats;
    const SolveReport r1 = brute_force(one, ModelKind::Blp, &stats);
    CHECK(r1.status == SolveStatus::Optimal);
    CHECK(stats.candidates == 1);

    oracle::ToyLimits limits;
    limits.max_flights_per_day = 5;
    limits.max_days = 1;
    std::uint64_t seed = 200;
    Instance five = oracle::random_toy(seed, limits);
    while (five.flights.size() != 5 || five.fleets.size() != 3)
        five = oracle::random_toy(++seed, limits);  // resample to 5 flights x 3 fleets
    BruteStats counted;
    const SolveReport r2 = brute_force(five, ModelKind::Blp, &counted);
    CHECK(counted.candidates == 243);  // 3^5, the whole search space
    CHECK(counted.candidates ==
          static_cast<unsigned long long>(std::llround(std::exp2(search_space_log2(five)))));
    const auto brute = oracle::enumerate_blp(five);
    if (brute.best)
        CHECK(objective_in_cents(r2) == *brute.best);
    else
        CHECK(r2.status == SolveStatus::Infeasible);

    GeneratorConfig config;  // 4^46 candidates: far past the refusal line
    config.flights_per_day = 46;
    config.days = 1;
    const Instance big = generate_instance(config);
    CHECK_THROWS_AS(brute_force(big, ModelKind::Blp, nullptr), std::invalid_argument);
}

TEST_CASE("a zero time budget reports a timeout with a usable bound") {
    GeneratorConfig config;
    config.flights_per_day = 46;
    config.days = 7;
    const Instance in = generate_instance(config);
    ExactConfig exact;
    exact.time_limit = 0.0;

    const SolveReport blp = solve_blp_exact(in, build_blp(in), exact);
    CHECK(blp.status == SolveStatus::TimedOut);
    CHECK(blp.bound.has_value());
    CHECK(!blp.assignment.has_value());

    GeneratorConfig one_day = config;
    one_day.days = 1;
    const Instance day = generate_instance(one_day);
    const SolveReport ilp = solve_ilp_exact(day, build_ilp(day), exact);
    CHECK(ilp.status == SolveStatus::TimedOut);
    CHECK(ilp.bound.has_value());
}
