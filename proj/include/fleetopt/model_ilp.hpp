#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fleetopt/types.hpp"

namespace fleetopt {

enum class EventKind { Arrival, Departure };

struct TimelineNode {
    int airport = 0;        // index into TimelineNetwork::airports
    int time = 0;           // minutes after midnight
    EventKind kind = EventKind::Arrival;
    long long flight_id = 0;
};

// Per-airport chains of flight events for a single day.  One node per flight
// endpoint (|M| = 2|F|); within an airport events sort by time with arrivals
// ahead of departures on ties, so an aircraft landing at t can leave at t.
struct TimelineNetwork {
    std::vector<std::string> airports;            // sorted distinct codes
    std::vector<TimelineNode> nodes;              // airport-major, chain order
    std::vector<std::vector<int>> airport_chains; // node indices per airport
    std::vector<long long> flight_ids;            // the day's flights, instance order
    std::vector<int> arrival_node_of;             // per flight position
    std::vector<int> departure_node_of;           // per flight position

    std::size_t node_count() const { return nodes.size(); }
};

TimelineNetwork build_timeline(const std::vector<Flight>& flights);

// Single-day assignment model with aircraft balance: x (flight, fleet)
// binaries plus grounded counts G at every node, linked by the per-node
// recursion G_k = G_{k-1} + arrivals - departures.  Initial grounded counts
// per (airport, fleet) are decision variables too, capped by sum <= N_j; they
// are tallied separately from the headline counters.
struct IlpModel {
    TimelineNetwork network;
    std::vector<Cents> effective_cost;   // flight-major x fleet
    std::vector<int> fleet_caps;
    long long variable_count = 0;        // |F|*eta + |M|*eta
    long long constraint_count = 0;      // |F| + eta + |M|*eta
    long long initial_variable_count = 0;   // |airports| * eta
    long long initial_constraint_count = 0; // eta

    std::size_t flight_count() const { return network.flight_ids.size(); }
    std::size_t fleet_count() const { return fleet_caps.size(); }
    Cents ec(std::size_t flight, std::size_t fleet) const {
        return effective_cost[flight * fleet_caps.size() + fleet];
    }
};

// Requires a single-day instance; multi-day schedules belong to the BLP model.
IlpModel build_ilp(const Instance& instance);

struct GroundedPropagation {
    struct Negative {
        int node = 0;
        int fleet = 0;
        int value = 0;
    };
    bool feasible = false;
    // grounded count after each node, [node][fleet]; valid when feasible
    std::vector<std::vector<int>> at_node;
    // grounded count at end of day, [airport][fleet]
    std::vector<std::vector<int>> end_of_day;
    std::optional<Negative> first_negative;   // first chain position going negative
};

// Walks every airport chain forward from the given initial grounded counts
// ([airport][fleet]).  The balance rows determine G uniquely, so this either
// returns the full grounded map or the first node where a count dips below zero.
GroundedPropagation propagate_grounded(const TimelineNetwork& network,
                                       const Assignment& assignment,
                                       const std::vector<std::vector<int>>& initial,
                                       std::size_t fleet_count);

// Smallest initial grounded counts keeping every chain non-negative: the
// maximum prefix excess of departures over arrivals, per airport and fleet.
std::vector<std::vector<int>> minimal_initials(const TimelineNetwork& network,
                                               const Assignment& assignment,
                                               std::size_t fleet_count);

// End-of-day grounded aircraft per airport: CSV with header "city,<fleet names...>".
void write_grounded_report(const Instance& instance,
                           const TimelineNetwork& network,
                           const std::vector<std::vector<int>>& end_of_day,
                           const std::filesystem::path& path);

}  // namespace fleetopt
