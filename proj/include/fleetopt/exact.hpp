#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "fleetopt/domain.hpp"
#include "fleetopt/model_blp.hpp"
#include "fleetopt/model_ilp.hpp"
#include "fleetopt/types.hpp"

namespace fleetopt {

struct ExactConfig {
    double time_limit = std::numeric_limits<double>::infinity();  // seconds
};

// Per-day transportation problems via successive shortest augmenting paths
// with node potentials (costs stay non-negative, so plain Dijkstra works).
// Optimal reports carry bound == objective.
SolveReport solve_blp_exact(const Instance& instance, const BlpModel& model,
                            const ExactConfig& config = {});

struct BranchStats {
    long long nodes = 0;
    std::vector<Cents> incumbent_history;   // each strict improvement, in order
};

// Depth-first branch and bound over the x variables.  Bound: transportation
// relaxation (assignment + fleet caps, balance dropped) on the unfixed
// flights.  Leaves are accepted when the minimal initial grounded counts fit
// the fleet sizes, which is exact because airport chains are independent.
SolveReport solve_ilp_exact(const Instance& instance, const IlpModel& model,
                            const ExactConfig& config = {},
                            BranchStats* stats = nullptr);

struct BruteStats {
    unsigned long long candidates = 0;   // assignment vectors evaluated
};

// Exhaustive enumeration over all eta^M assignments (test oracle).  Refuses
// search spaces beyond 2^24 candidates.
SolveReport brute_force(const Instance& instance, ModelKind kind,
                        BruteStats* stats = nullptr);

// Residual-graph optimality certificate for the transportation solver, used
// by tests and debug builds: no augmenting cycle with negative reduced cost.
bool verify_day_optimality(const DayProblem& day, const Assignment& assignment);

}  // namespace fleetopt
