#include "fleetopt/domain.hpp"

#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "fleetopt/model_ilp.hpp"

namespace fleetopt {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Feasible: return "Feasible";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::TimedOut: return "TimedOut";
    }
    return "?";
}

void validate(const Instance& instance) {
    for (std::size_t j = 0; j < instance.fleets.size(); ++j) {
        const FleetType& f = instance.fleets[j];
        if (f.id != static_cast<int>(j))
            throw ModelError("fleet ids must be dense 0..n-1, got " + std::to_string(f.id));
        if (f.capacity <= 0)
            throw ModelError("fleet " + f.name + " has non-positive capacity");
        if (f.available < 0)
            throw ModelError("fleet " + f.name + " has negative availability");
    }
    if (instance.lambda < 0.0) throw ModelError("lambda must be non-negative");

    std::set<int> day_set(instance.days.begin(), instance.days.end());
    if (day_set.size() != instance.days.size())
        throw ModelError("day list contains duplicates");

    std::unordered_set<long long> seen_ids;
    for (const Flight& fl : instance.flights) {
        if (!seen_ids.insert(fl.id).second)
            throw ModelError("duplicate flight id " + std::to_string(fl.id) +
                             " on day " + std::to_string(fl.day));
        if (fl.origin == fl.destination)
            throw ModelError("flight " + std::to_string(fl.id) + " loops at " + fl.origin);
        if (fl.origin.empty() || fl.destination.empty())
            throw ModelError("flight " + std::to_string(fl.id) + " missing an airport code");
        if (fl.departure < 0 || fl.departure >= 1440 || fl.arrival < 0 || fl.arrival >= 1440)
            throw ModelError("flight " + std::to_string(fl.id) + " has a time outside 00:00..23:59");
        if (fl.demand < 0)
            throw ModelError("flight " + std::to_string(fl.id) + " has negative demand");
        if (!day_set.count(fl.day))
            throw ModelError("flight " + std::to_string(fl.id) + " sits on unlisted day " +
                             std::to_string(fl.day));
    }
    if (instance.costs.fleet_stride() != instance.fleets.size())
        throw ModelError("cost table fleet stride does not match the fleet list");
    for (std::size_t i = 0; i < instance.flights.size(); ++i)
        for (std::size_t j = 0; j < instance.fleets.size(); ++j)
            if (!instance.costs.has(i, j))
                throw ModelError("no cost for flight " + std::to_string(instance.flights[i].id) +
                                 ", fleet " + instance.fleets[j].name);
}

Cents penalty_cents(double lambda, int capacity, int demand) {
    const long long diff = static_cast<long long>(capacity) - demand;
    return std::llround(lambda * static_cast<double>(diff * diff) * 100.0);
}

Cents effective_cost_cents(const Instance& instance, std::size_t flight_row, int fleet_id) {
    const Flight& fl = instance.flights.at(flight_row);
    const FleetType& ft = instance.fleets.at(static_cast<std::size_t>(fleet_id));
    return instance.costs.at(flight_row, static_cast<std::size_t>(fleet_id)) +
           penalty_cents(instance.lambda, ft.capacity, fl.demand);
}

Cents evaluate_objective_cents(const Instance& instance, const Assignment& assignment) {
    Cents total = 0;
    for (std::size_t i = 0; i < instance.flights.size(); ++i) {
        const Flight& fl = instance.flights[i];
        auto it = assignment.fleet_of.find(fl.id);
        if (it == assignment.fleet_of.end())
            throw std::invalid_argument("assignment misses flight " + std::to_string(fl.id));
        const int fleet = it->second;
        if (fleet < 0 || fleet >= static_cast<int>(instance.fleets.size()))
            throw std::invalid_argument("assignment maps flight " + std::to_string(fl.id) +
                                        " to unknown fleet " + std::to_string(fleet));
        total += effective_cost_cents(instance, i, fleet);
    }
    return total;
}

double evaluate_objective(const Instance& instance, const Assignment& assignment) {
    return to_currency(evaluate_objective_cents(instance, assignment));
}

namespace {

// fleet id of a flight if assigned and valid, else -1
int assigned_fleet(const Assignment& assignment, long long flight_id, int fleet_count) {
    auto it = assignment.fleet_of.find(flight_id);
    if (it == assignment.fleet_of.end()) return -1;
    if (it->second < 0 || it->second >= fleet_count) return -1;
    return it->second;
}

void check_one_hot(const Instance& instance, const Assignment& assignment,
                   std::vector<Violation>& out) {
    const int eta = static_cast<int>(instance.fleets.size());
    for (const Flight& fl : instance.flights) {
        if (assigned_fleet(assignment, fl.id, eta) < 0)
            out.push_back({ViolationFamily::OneHot,
                           "onehot flight=" + std::to_string(fl.id) +
                               " day=" + std::to_string(fl.day),
                           1});
    }
}

void check_day_caps(const Instance& instance, const Assignment& assignment,
                    std::vector<Violation>& out) {
    const int eta = static_cast<int>(instance.fleets.size());
    for (int day : instance.days) {
        std::vector<long long> count(eta, 0);
        for (const Flight& fl : instance.flights) {
            if (fl.day != day) continue;
            int j = assigned_fleet(assignment, fl.id, eta);
            if (j >= 0) ++count[j];
        }
        for (int j = 0; j < eta; ++j) {
            long long excess = count[j] - instance.fleets[j].available;
            if (excess > 0)
                out.push_back({ViolationFamily::FleetCap,
                               "cap day=" + std::to_string(day) +
                                   " fleet=" + instance.fleets[j].name,
                               excess});
        }
    }
}

// Grounded-count checks for one day's timeline.  With explicit grounded
// counts we verify the balance recursion and non-negativity (including the
// implied initial counts); otherwise we test that the minimal feasible
// initials fit the fleet sizes.
void check_balance(const Instance& instance, const Assignment& assignment, int day,
                   std::vector<Violation>& out) {
    const int eta = static_cast<int>(instance.fleets.size());
    std::vector<Flight> day_flights;
    for (const Flight& fl : instance.flights)
        if (fl.day == day) day_flights.push_back(fl);
    if (day_flights.empty()) return;

    TimelineNetwork net = build_timeline(day_flights);
    auto delta = [&](int node, int j) -> int {
        const TimelineNode& n = net.nodes[node];
        if (assigned_fleet(assignment, n.flight_id, eta) != j) return 0;
        return n.kind == EventKind::Arrival ? 1 : -1;
    };

    const bool single_day = instance.days.size() == 1;
    if (single_day && assignment.grounded.has_value()) {
        const auto& g = *assignment.grounded;
        auto value_at = [&](int node, int j) {
            auto it = g.find({node, j});
            return it == g.end() ? 0 : it->second;
        };
        std::vector<long long> initial_sum(eta, 0);
        for (std::size_t a = 0; a < net.airport_chains.size(); ++a) {
            const auto& chain = net.airport_chains[a];
            for (int j = 0; j < eta; ++j) {
                int prev = 0;
                for (std::size_t k = 0; k < chain.size(); ++k) {
                    const int node = chain[k];
                    const int got = value_at(node, j);
                    if (k == 0) {
                        // first row determines the implied initial count
                        const int g0 = got - delta(node, j);
                        if (g0 < 0)
                            out.push_back({ViolationFamily::GroundedNegative,
                                           "initial airport=" + net.airports[a] +
                                               " fleet=" + instance.fleets[j].name,
                                           -static_cast<long long>(g0)});
                        initial_sum[j] += std::max(g0, 0);
                    } else {
                        const long long residual = got - (prev + delta(node, j));
                        if (residual != 0)
                            out.push_back({ViolationFamily::Balance,
                                           "balance node=" + std::to_string(node) +
                                               " fleet=" + instance.fleets[j].name,
                                           residual});
                    }
                    if (got < 0)
                        out.push_back({ViolationFamily::GroundedNegative,
                                       "grounded node=" + std::to_string(node) +
                                           " fleet=" + instance.fleets[j].name,
                                       -static_cast<long long>(got)});
                    prev = got;
                }
            }
        }
        for (int j = 0; j < eta; ++j) {
            long long excess = initial_sum[j] - instance.fleets[j].available;
            if (excess > 0)
                out.push_back({ViolationFamily::FleetCap,
                               "initial fleet=" + instance.fleets[j].name, excess});
        }
        return;
    }

    // No grounded counts given: feasibility means some initial placement
    // works, and the cheapest one is the per-chain minimal requirement.
    auto need = minimal_initials(net, assignment, static_cast<std::size_t>(eta));
    for (int j = 0; j < eta; ++j) {
        long long total = 0;
        for (std::size_t a = 0; a < need.size(); ++a) total += need[a][j];
        long long excess = total - instance.fleets[j].available;
        if (excess > 0)
            out.push_back({ViolationFamily::Balance,
                           "initial-demand day=" + std::to_string(day) +
                               " fleet=" + instance.fleets[j].name,
                           excess});
    }
}

}  // namespace

std::vector<Violation> check_feasibility(const Instance& instance,
                                         const Assignment& assignment,
                                         ModelKind kind) {
    std::vector<Violation> out;
    check_one_hot(instance, assignment, out);
    check_day_caps(instance, assignment, out);
    if (kind == ModelKind::Ilp)
        for (int day : instance.days) check_balance(instance, assignment, day, out);
    return out;
}

double search_space_log2(const Instance& instance) {
    const std::size_t m = instance.flights.size();
    if (m == 0) return 0.0;
    if (instance.fleets.empty())
        throw std::invalid_argument("search space undefined without fleets");
    return static_cast<double>(m) * std::log2(static_cast<double>(instance.fleets.size()));
}

}  // namespace fleetopt
