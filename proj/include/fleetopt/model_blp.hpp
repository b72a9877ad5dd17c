#pragma once

#include <cstddef>
#include <vector>

#include "fleetopt/types.hpp"

namespace fleetopt {

// One day's fleet-assignment subproblem: choose a fleet per flight, at most
// N_j flights per fleet, minimizing summed effective cost.  The quadratic
// seat-mismatch term is already folded into `effective_cost`, which is what
// makes the day a plain transportation problem.
struct DayProblem {
    int day = 0;
    std::vector<long long> flight_ids;       // instance order
    std::vector<std::size_t> flight_rows;    // rows into Instance::flights
    std::vector<Cents> effective_cost;       // flight-major x fleet
    std::vector<int> fleet_caps;             // N_j
    bool capacity_infeasible = false;        // sum(N_j) < |F_d|

    std::size_t flight_count() const { return flight_ids.size(); }
    std::size_t fleet_count() const { return fleet_caps.size(); }
    Cents ec(std::size_t flight, std::size_t fleet) const {
        return effective_cost[flight * fleet_caps.size() + fleet];
    }
};

struct BlpModel {
    std::vector<DayProblem> day_problems;    // ascending day order
    long long variable_count = 0;            // sum_d |F_d| * eta
    long long constraint_count = 0;          // sum_d |F_d| + eta * |D|
    std::size_t fleet_count = 0;
};

BlpModel build_blp(const Instance& instance);

// The per-day decomposition is exact: days share no variables or constraints,
// so solving each subproblem to optimality and summing equals the joint optimum.
const std::vector<DayProblem>& decompose_by_day(const BlpModel& model);

}  // namespace fleetopt
