#pragma once

#include "fleetopt/types.hpp"

namespace fleetopt {

enum class ModelKind { Blp, Ilp };

// Seat-mismatch penalty for one flight leg in cents: lambda * (Q_j - D_i)^2
// currency units.  Exact for any lambda with <= 2 decimal places.
Cents penalty_cents(double lambda, int capacity, int demand);

// Operating cost plus seat-mismatch penalty for assigning one flight to one
// fleet; this is the per-variable coefficient both models share.
Cents effective_cost_cents(const Instance& instance, std::size_t flight_row, int fleet_id);

// Total objective over a complete assignment.  Requires fleet_of to cover
// every flight; throws ModelError on a missing cost entry, std::invalid_argument
// on an incomplete assignment or unknown fleet id.
Cents evaluate_objective_cents(const Instance& instance, const Assignment& assignment);
double evaluate_objective(const Instance& instance, const Assignment& assignment);

enum class ViolationFamily {
    OneHot,            // flight not assigned exactly one valid fleet
    FleetCap,          // more flights on a fleet than airframes available
    Balance,           // grounded-count recursion broken at a timeline node
    GroundedNegative,  // grounded count below zero (incl. implied initials)
};

struct Violation {
    ViolationFamily family;
    std::string label;   // human-readable constraint identity, e.g. "onehot flight=11112 day=1"
    long long slack = 0; // by how much the constraint is missed
};

// Lists every violated constraint of the chosen model; empty means feasible.
// Violations are data, not errors: any assignment may be checked.
std::vector<Violation> check_feasibility(const Instance& instance,
                                         const Assignment& assignment,
                                         ModelKind kind);

// log2 of the number of fleet-assignment vectors, eta^M with M total flights.
double search_space_log2(const Instance& instance);

}  // namespace fleetopt
