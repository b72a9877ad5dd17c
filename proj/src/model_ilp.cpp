#include "fleetopt/model_ilp.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "fleetopt/domain.hpp"

namespace fleetopt {

TimelineNetwork build_timeline(const std::vector<Flight>& flights) {
    TimelineNetwork net;

    std::map<std::string, int> airport_index;
    for (const Flight& fl : flights) {
        airport_index.emplace(fl.origin, 0);
        airport_index.emplace(fl.destination, 0);
    }
    for (auto& [code, idx] : airport_index) {
        idx = static_cast<int>(net.airports.size());
        net.airports.push_back(code);
    }

    struct Event {
        int airport;
        int time;
        EventKind kind;
        long long flight_id;
        std::size_t flight_pos;
    };
    std::vector<std::vector<Event>> per_airport(net.airports.size());
    for (std::size_t i = 0; i < flights.size(); ++i) {
        const Flight& fl = flights[i];
        net.flight_ids.push_back(fl.id);
        per_airport[airport_index[fl.origin]].push_back(
            {airport_index[fl.origin], fl.departure, EventKind::Departure, fl.id, i});
        per_airport[airport_index[fl.destination]].push_back(
            {airport_index[fl.destination], fl.arrival, EventKind::Arrival, fl.id, i});
    }

    net.arrival_node_of.assign(flights.size(), -1);
    net.departure_node_of.assign(flights.size(), -1);
    net.airport_chains.resize(net.airports.size());
    for (std::size_t a = 0; a < per_airport.size(); ++a) {
        auto& events = per_airport[a];
        // arrivals sort ahead of departures on time ties: an aircraft landing
        // at t is available for a departure at t
        std::stable_sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
            if (x.time != y.time) return x.time < y.time;
            if (x.kind != y.kind) return x.kind == EventKind::Arrival;
            return x.flight_id < y.flight_id;
        });
        for (const Event& ev : events) {
            const int node = static_cast<int>(net.nodes.size());
            net.nodes.push_back({ev.airport, ev.time, ev.kind, ev.flight_id});
            net.airport_chains[a].push_back(node);
            if (ev.kind == EventKind::Arrival)
                net.arrival_node_of[ev.flight_pos] = node;
            else
                net.departure_node_of[ev.flight_pos] = node;
        }
    }
    return net;
}

IlpModel build_ilp(const Instance& instance) {
    validate(instance);
    if (instance.days.size() > 1)
        throw ModelError("aircraft-balance model is single-day; use the multi-day "
                         "assignment model for " + std::to_string(instance.days.size()) +
                         " days");

    IlpModel model;
    model.network = build_timeline(instance.flights);
    const std::size_t eta = instance.fleets.size();
    for (const FleetType& f : instance.fleets) model.fleet_caps.push_back(f.available);
    for (std::size_t i = 0; i < instance.flights.size(); ++i)
        for (std::size_t j = 0; j < eta; ++j)
            model.effective_cost.push_back(
                effective_cost_cents(instance, i, static_cast<int>(j)));

    const long long F = static_cast<long long>(instance.flights.size());
    const long long M = static_cast<long long>(model.network.node_count());
    const long long E = static_cast<long long>(eta);
    model.variable_count = F * E + M * E;
    model.constraint_count = F + E + M * E;
    model.initial_variable_count = static_cast<long long>(model.network.airports.size()) * E;
    model.initial_constraint_count = E;
    return model;
}

namespace {

// +1 arrival / -1 departure for the fleet the node's flight is assigned to,
// or no fleet at all if the flight is unassigned.
int node_fleet(const TimelineNode& node, const Assignment& assignment, int eta) {
    auto it = assignment.fleet_of.find(node.flight_id);
    if (it == assignment.fleet_of.end()) return -1;
    if (it->second < 0 || it->second >= eta) return -1;
    return it->second;
}

}  // namespace

GroundedPropagation propagate_grounded(const TimelineNetwork& network,
                                       const Assignment& assignment,
                                       const std::vector<std::vector<int>>& initial,
                                       std::size_t fleet_count) {
    GroundedPropagation result;
    result.at_node.assign(network.node_count(), {});
    result.end_of_day.assign(network.airports.size(),
                             std::vector<int>(fleet_count, 0));

    for (std::size_t a = 0; a < network.airport_chains.size(); ++a) {
        std::vector<int> g = a < initial.size() ? initial[a]
                                                : std::vector<int>(fleet_count, 0);
        g.resize(fleet_count, 0);
        for (int node : network.airport_chains[a]) {
            const TimelineNode& n = network.nodes[node];
            const int j = node_fleet(n, assignment, static_cast<int>(fleet_count));
            if (j >= 0) {
                g[j] += n.kind == EventKind::Arrival ? 1 : -1;
                if (g[j] < 0 && !result.first_negative)
                    result.first_negative = GroundedPropagation::Negative{node, j, g[j]};
            }
            result.at_node[node] = g;
        }
        result.end_of_day[a] = g;
    }
    result.feasible = !result.first_negative.has_value();
    return result;
}

std::vector<std::vector<int>> minimal_initials(const TimelineNetwork& network,
                                               const Assignment& assignment,
                                               std::size_t fleet_count) {
    // The chain recursion gives G_k = g0 + prefix_k, so the smallest workable
    // g0 is the deepest prefix deficit, independently per airport and fleet.
    std::vector<std::vector<int>> need(network.airports.size(),
                                       std::vector<int>(fleet_count, 0));
    for (std::size_t a = 0; a < network.airport_chains.size(); ++a) {
        std::vector<int> prefix(fleet_count, 0);
        for (int node : network.airport_chains[a]) {
            const TimelineNode& n = network.nodes[node];
            const int j = node_fleet(n, assignment, static_cast<int>(fleet_count));
            if (j < 0) continue;
            prefix[j] += n.kind == EventKind::Arrival ? 1 : -1;
            need[a][j] = std::max(need[a][j], -prefix[j]);
        }
    }
    return need;
}

void write_grounded_report(const Instance& instance,
                           const TimelineNetwork& network,
                           const std::vector<std::vector<int>>& end_of_day,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "city";
    for (const FleetType& f : instance.fleets) out << ',' << f.name;
    out << '\n';
    for (std::size_t a = 0; a < network.airports.size(); ++a) {
        out << network.airports[a];
        for (std::size_t j = 0; j < instance.fleets.size(); ++j)
            out << ',' << (a < end_of_day.size() ? end_of_day[a][j] : 0);
        out << '\n';
    }
}

}  // namespace fleetopt
