#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fleetopt/cqm.hpp"
#include "fleetopt/model_blp.hpp"
#include "fleetopt/model_ilp.hpp"
#include "fleetopt/types.hpp"

namespace fleetopt {

struct AnnealConfig {
    long long sweeps = 0;        // per restart; 0 selects 2000 * sqrt(bits)
    int restarts = 8;
    double beta_start = 0.1;
    double beta_end = 10.0;
    long long beta_steps = 0;    // distinct beta values; 0 = one per sweep
    std::uint64_t seed = 1;
    bool repair = true;
    double time_limit = std::numeric_limits<double>::infinity();  // seconds
    int workers = 0;             // concurrent restarts; 0 = hardware default
    bool verify_energy = false;  // recompute full energy each sweep (tests)
};

long long default_sweeps(std::size_t bits);

// Model-level repair used between decode and reporting: returns false when
// the solution cannot be made feasible (so the restart is discarded).
using RepairHook = std::function<bool(std::vector<long long>& values)>;

struct AnnealStats {
    std::vector<Cents> best_energy_trace;   // per sweep of restart 0, non-increasing
    int feasible_restarts = 0;
};

// Multi-restart single-bit-flip Metropolis on the QUBO with a geometric beta
// schedule and incremental energy deltas.  Each restart contributes its
// repaired best-energy state plus the best feasible state it visited; the
// cheapest feasible candidate wins.  Metropolis deltas are normalized by
// qubo.energy_scale: the schedule endpoints are fixed, so temperature is
// expressed in characteristic objective deltas rather than raw cents.
SolveReport anneal(const QuboForm& qubo, const AnnealConfig& config,
                   const RepairHook& repair_hook = {},
                   std::optional<Cents> optimal_bound = {},
                   AnnealStats* stats = nullptr);

// Greedy feasibility repair on one day's assignment vector (values indexed
// flight-major x fleet): flights with zero or multiple fleets chosen get the
// cheapest feasibility-respecting fleet, then excess flights move off
// over-committed fleets by smallest cost increase.  Idempotent on feasible
// input; false when sum(N_j) cannot seat every flight.
bool repair_day_values(const DayProblem& day, std::vector<long long>& values);

// Steepest-descent pass over a clean one-fleet-per-flight layout: repeatedly
// applies the best cost-reducing reassignment chain or fleet rotation of up
// to three flights, keeping every fleet inside its cap, until none is left.
// A bounded neighborhood, so the result is locally - not globally - optimal.
void polish_day_values(const DayProblem& day, std::vector<long long>& values);

// Annealing backends.  Both compile per-day QUBOs with a quality-oriented
// penalty (a small multiple of the mean per-flight cost gap) rather than the
// provably-exact automatic one, with per-flight costs rebased so only the
// fleet-choice deltas remain.  Unless repair is disabled, every candidate is
// repaired feasible and then descended to a local optimum (polish_day_values)
// before the cheapest one is kept.
SolveReport solve_blp_anneal(const Instance& instance, const BlpModel& model,
                             const AnnealConfig& config = {});

// Anneals x bits only; grounded counts come from forward propagation with
// minimal initials, and restarts whose initials exceed fleet sizes are dropped.
SolveReport solve_ilp_anneal(const Instance& instance, const IlpModel& model,
                             const AnnealConfig& config = {});

}  // namespace fleetopt
