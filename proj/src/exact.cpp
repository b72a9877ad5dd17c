#include "fleetopt/exact.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>

namespace fleetopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr Cents kInf = std::numeric_limits<Cents>::max() / 4;

// Unit-supply transportation network: source -> flight -> fleet -> sink.
// Successive shortest augmenting paths; the node potentials keep every
// reduced cost non-negative so each round is a plain Dijkstra.
class TransportSolver {
public:
    TransportSolver(std::size_t flights, const std::vector<int>& caps)
        : flights_(flights), fleets_(caps.size()) {
        const int n = node_count();
        adj_.resize(n);
        for (std::size_t i = 0; i < flights_; ++i) add_edge(source(), flight(i), 1, 0);
        for (std::size_t j = 0; j < fleets_; ++j) add_edge(fleet(j), sink(), caps[j], 0);
    }

    void set_cost(std::size_t i, std::size_t j, Cents ec) { add_edge(flight(i), fleet(j), 1, ec); }

    // augments one unit per round; false once the sink is unreachable
    bool solve(std::size_t rounds_wanted) {
        potential_.assign(node_count(), 0);
        for (std::size_t r = 0; r < rounds_wanted; ++r)
            if (!augment()) return false;
        return true;
    }

    Cents total_cost() const {
        Cents total = 0;
        for (std::size_t e = 0; e < edges_.size(); e += 2)
            total += static_cast<Cents>(edges_[e ^ 1].cap) * edges_[e].cost;
        return total;
    }

    // fleet chosen per flight (-1 if the flight carries no flow)
    std::vector<int> chosen() const {
        std::vector<int> out(flights_, -1);
        for (std::size_t i = 0; i < flights_; ++i)
            for (int e : adj_[flight(i)])
                if ((e & 1) == 0 && edges_[static_cast<std::size_t>(e)].cap == 0 &&
                    edges_[static_cast<std::size_t>(e)].to != source())
                    out[i] = edges_[static_cast<std::size_t>(e)].to - static_cast<int>(flights_) - 1;
        return out;
    }

private:
    struct Edge {
        int to;
        int cap;
        Cents cost;
    };

    int source() const { return 0; }
    int flight(std::size_t i) const { return 1 + static_cast<int>(i); }
    int fleet(std::size_t j) const { return 1 + static_cast<int>(flights_ + j); }
    int sink() const { return 1 + static_cast<int>(flights_ + fleets_); }
    int node_count() const { return 2 + static_cast<int>(flights_ + fleets_); }

    void add_edge(int u, int v, int cap, Cents cost) {
        adj_[static_cast<std::size_t>(u)].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({v, cap, cost});
        adj_[static_cast<std::size_t>(v)].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({u, 0, -cost});
    }

    bool augment() {
        const int n = node_count();
        std::vector<Cents> dist(static_cast<std::size_t>(n), kInf);
        std::vector<int> prev_edge(static_cast<std::size_t>(n), -1);
        using Item = std::pair<Cents, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[0] = 0;
        heap.push({0, source()});
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[static_cast<std::size_t>(u)]) continue;
            for (int e : adj_[static_cast<std::size_t>(u)]) {
                const Edge& edge = edges_[static_cast<std::size_t>(e)];
                if (edge.cap <= 0) continue;
                const Cents nd = d + edge.cost + potential_[static_cast<std::size_t>(u)] -
                                 potential_[static_cast<std::size_t>(edge.to)];
                if (nd < dist[static_cast<std::size_t>(edge.to)]) {
                    dist[static_cast<std::size_t>(edge.to)] = nd;
                    prev_edge[static_cast<std::size_t>(edge.to)] = e;
                    heap.push({nd, edge.to});
                }
            }
        }
        if (dist[static_cast<std::size_t>(sink())] >= kInf) return false;
        for (int v = 0; v < n; ++v)
            if (dist[static_cast<std::size_t>(v)] < kInf)
                potential_[static_cast<std::size_t>(v)] += dist[static_cast<std::size_t>(v)];
        for (int v = sink(); v != source();) {
            const int e = prev_edge[static_cast<std::size_t>(v)];
            edges_[static_cast<std::size_t>(e)].cap -= 1;
            edges_[static_cast<std::size_t>(e ^ 1)].cap += 1;
            v = edges_[static_cast<std::size_t>(e ^ 1)].to;
        }
        return true;
    }

    std::size_t flights_;
    std::size_t fleets_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<Cents> potential_;
};

// Optimal cost of one day's transportation problem with optional residual
// caps and a subset of flights; nullopt when the caps cannot seat everyone.
std::optional<Cents> day_relaxation(const DayProblem& day,
                                    const std::vector<std::size_t>& flights,
                                    const std::vector<int>& caps,
                                    std::vector<int>* chosen = nullptr) {
    long long seats = 0;
    for (int c : caps) seats += c;
    if (seats < static_cast<long long>(flights.size())) return std::nullopt;
    TransportSolver solver(flights.size(), caps);
    for (std::size_t p = 0; p < flights.size(); ++p)
        for (std::size_t j = 0; j < caps.size(); ++j)
            solver.set_cost(p, j, day.ec(flights[p], j));
    if (!solver.solve(flights.size())) return std::nullopt;
    if (chosen) *chosen = solver.chosen();
    return solver.total_cost();
}

}  // namespace

SolveReport solve_blp_exact(const Instance&, const BlpModel& model, const ExactConfig& config) {
    const auto start = Clock::now();
    SolveReport report;

    for (const DayProblem& day : model.day_problems)
        if (day.capacity_infeasible) {
            report.status = SolveStatus::Infeasible;
            report.wall_time = seconds_since(start);
            return report;
        }

    Assignment assignment;
    Cents total = 0;
    for (std::size_t d = 0; d < model.day_problems.size(); ++d) {
        const DayProblem& day = model.day_problems[d];
        if (seconds_since(start) > config.time_limit) {
            // lower-bound the unfinished days by their cheapest rows
            Cents bound = total;
            for (std::size_t r = d; r < model.day_problems.size(); ++r) {
                const DayProblem& rest = model.day_problems[r];
                for (std::size_t i = 0; i < rest.flight_count(); ++i) {
                    Cents best = kInf;
                    for (std::size_t j = 0; j < rest.fleet_count(); ++j)
                        best = std::min(best, rest.ec(i, j));
                    bound += best;
                }
            }
            report.status = SolveStatus::TimedOut;
            report.bound = to_currency(bound);
            report.wall_time = seconds_since(start);
            return report;
        }

        std::vector<std::size_t> all(day.flight_count());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        std::vector<int> chosen;
        auto cost = day_relaxation(day, all, day.fleet_caps, &chosen);
        if (!cost) {
            report.status = SolveStatus::Infeasible;
            report.wall_time = seconds_since(start);
            return report;
        }
        total += *cost;
        for (std::size_t i = 0; i < day.flight_count(); ++i)
            assignment.fleet_of[day.flight_ids[i]] = chosen[i];
        assert(verify_day_optimality(day, assignment));
    }

    report.status = SolveStatus::Optimal;
    report.objective = to_currency(total);
    report.bound = report.objective;
    report.assignment = std::move(assignment);
    report.wall_time = seconds_since(start);
    return report;
}

bool verify_day_optimality(const DayProblem& day, const Assignment& assignment) {
    // A feasible transportation flow is optimal iff the residual exchange
    // graph has no negative cycle; Bellman-Ford over fleet nodes finds one.
    const std::size_t eta = day.fleet_count();
    std::vector<int> count(eta, 0);
    std::vector<int> chosen(day.flight_count(), -1);
    for (std::size_t i = 0; i < day.flight_count(); ++i) {
        auto it = assignment.fleet_of.find(day.flight_ids[i]);
        if (it == assignment.fleet_of.end()) return false;
        chosen[i] = it->second;
        ++count[static_cast<std::size_t>(it->second)];
    }
    for (std::size_t j = 0; j < eta; ++j)
        if (count[j] > day.fleet_caps[j]) return false;

    // arc j -> k: cheapest move of one flight off fleet j onto fleet k
    const std::size_t n = eta + 1;  // extra node stands for spare capacity
    std::vector<std::vector<Cents>> arc(n, std::vector<Cents>(n, kInf));
    for (std::size_t i = 0; i < day.flight_count(); ++i) {
        const auto j = static_cast<std::size_t>(chosen[i]);
        for (std::size_t k = 0; k < eta; ++k)
            if (k != j) arc[j][k] = std::min(arc[j][k], day.ec(i, k) - day.ec(i, j));
    }
    for (std::size_t j = 0; j < eta; ++j) {
        if (count[j] < day.fleet_caps[j]) arc[j][eta] = 0;  // j can grow by one
        if (count[j] > 0) arc[eta][j] = 0;                  // j can give one up
    }
    // a chain of j->k arcs keeps every count unchanged, and a detour through
    // the spare node trades one fleet's headroom against another's surplus,
    // so negative cycles here are exactly the improving exchanges
    std::vector<Cents> dist(n, 0);
    for (std::size_t round = 0; round < n; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                if (arc[u][v] >= kInf) continue;
                if (dist[u] + arc[u][v] < dist[v]) {
                    dist[v] = dist[u] + arc[u][v];
                    changed = true;
                }
            }
        if (!changed) return true;
    }
    return false;
}

SolveReport solve_ilp_exact(const Instance& instance, const IlpModel& model,
                            const ExactConfig& config, BranchStats* stats) {
    const auto start = Clock::now();
    SolveReport report;
    const std::size_t F = model.flight_count();
    const std::size_t eta = model.fleet_count();

    // reuse the transportation machinery through a day view of the model
    DayProblem day;
    day.day = instance.days.empty() ? 1 : instance.days.front();
    day.flight_ids = model.network.flight_ids;
    day.effective_cost = model.effective_cost;
    day.fleet_caps = model.fleet_caps;

    long long seats = 0;
    for (int c : model.fleet_caps) seats += c;
    if (seats < static_cast<long long>(F)) {
        report.status = SolveStatus::Infeasible;
        report.wall_time = seconds_since(start);
        return report;
    }

    // branch on the flight with the widest gap between its two cheapest
    // fleets first; cheapest fleet first within a flight
    std::vector<std::size_t> order(F);
    for (std::size_t i = 0; i < F; ++i) order[i] = i;
    std::vector<Cents> regret(F, 0);
    for (std::size_t i = 0; i < F; ++i) {
        Cents best = kInf, second = kInf;
        for (std::size_t j = 0; j < eta; ++j) {
            const Cents c = day.ec(i, j);
            if (c < best) {
                second = best;
                best = c;
            } else {
                second = std::min(second, c);
            }
        }
        regret[i] = eta > 1 ? second - best : 0;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return regret[a] > regret[b]; });

    std::vector<int> fixed(F, -1);
    Cents incumbent = kInf;
    std::vector<int> best_choice;
    bool timed_out = false;
    Cents root_bound = 0;  // stays a valid global lower bound throughout
    for (std::size_t i = 0; i < F; ++i) {
        Cents best = kInf;
        for (std::size_t j = 0; j < eta; ++j) best = std::min(best, day.ec(i, j));
        root_bound += best;
    }

    auto leaf_feasible = [&](const std::vector<int>& choice) {
        Assignment a;
        for (std::size_t i = 0; i < F; ++i) a.fleet_of[day.flight_ids[i]] = choice[i];
        auto need = minimal_initials(model.network, a, eta);
        for (std::size_t j = 0; j < eta; ++j) {
            long long total = 0;
            for (const auto& per_airport : need) total += per_airport[j];
            if (total > model.fleet_caps[j]) return false;
        }
        return true;
    };

    // depth-first over the branching order; depth == how many are fixed
    std::function<void(std::size_t, Cents)> dfs = [&](std::size_t depth, Cents fixed_cost) {
        if (timed_out) return;
        if (seconds_since(start) > config.time_limit) {
            timed_out = true;
            return;
        }
        if (stats) ++stats->nodes;

        std::vector<std::size_t> unfixed;
        std::vector<int> caps = model.fleet_caps;
        for (std::size_t i = 0; i < F; ++i)
            if (fixed[i] >= 0)
                --caps[static_cast<std::size_t>(fixed[i])];
            else
                unfixed.push_back(i);
        for (int c : caps)
            if (c < 0) return;  // a fixed fleet is over its airframes

        std::vector<int> relax_choice;
        auto relax = day_relaxation(day, unfixed, caps, &relax_choice);
        if (!relax) return;
        const Cents bound = fixed_cost + *relax;
        if (depth == 0) root_bound = bound;
        if (bound >= incumbent) return;

        // probe the relaxation's own completion: if its minimal initial
        // placement fits, this subtree is solved at its lower bound
        std::vector<int> completed = fixed;
        for (std::size_t p = 0; p < unfixed.size(); ++p) completed[unfixed[p]] = relax_choice[p];
        if (leaf_feasible(completed)) {
            incumbent = bound;
            best_choice = completed;
            if (stats) stats->incumbent_history.push_back(incumbent);
            return;
        }
        if (depth == F) return;  // complete but balance-infeasible

        const std::size_t next = order[depth];
        std::vector<std::size_t> fleets(eta);
        for (std::size_t j = 0; j < eta; ++j) fleets[j] = j;
        std::stable_sort(fleets.begin(), fleets.end(), [&](std::size_t a, std::size_t b) {
            return day.ec(next, a) < day.ec(next, b);
        });
        for (std::size_t j : fleets) {
            fixed[next] = static_cast<int>(j);
            dfs(depth + 1, fixed_cost + day.ec(next, j));
            fixed[next] = -1;
            if (timed_out) return;
        }
    };
    dfs(0, 0);

    report.wall_time = seconds_since(start);
    if (timed_out) {
        report.status = SolveStatus::TimedOut;
        if (incumbent < kInf) report.objective = to_currency(incumbent);
        report.bound = to_currency(root_bound);
        return report;
    }
    if (incumbent >= kInf) {
        report.status = SolveStatus::Infeasible;
        return report;
    }

    Assignment assignment;
    for (std::size_t i = 0; i < F; ++i) assignment.fleet_of[day.flight_ids[i]] = best_choice[i];
    auto initial = minimal_initials(model.network, assignment, eta);
    auto propagation = propagate_grounded(model.network, assignment, initial, eta);
    assert(propagation.feasible);
    std::map<std::pair<int, int>, int> grounded;
    for (std::size_t k = 0; k < propagation.at_node.size(); ++k)
        for (std::size_t j = 0; j < eta; ++j)
            grounded[{static_cast<int>(k), static_cast<int>(j)}] = propagation.at_node[k][j];
    assignment.grounded = std::move(grounded);

    report.status = SolveStatus::Optimal;
    report.objective = to_currency(incumbent);
    report.bound = report.objective;
    report.assignment = std::move(assignment);
    return report;
}

SolveReport brute_force(const Instance& instance, ModelKind kind, BruteStats* stats) {
    if (search_space_log2(instance) > 24.0)
        throw std::invalid_argument("brute force refuses search spaces beyond 2^24");
    const auto start = Clock::now();
    const std::size_t eta = instance.fleets.size();

    SolveReport report;
    Assignment assignment;
    Cents total = 0;
    unsigned long long candidates = 0;

    for (int current_day : instance.days) {
        std::vector<std::size_t> rows;
        std::vector<long long> ids;
        std::vector<Flight> day_flights;
        for (std::size_t i = 0; i < instance.flights.size(); ++i)
            if (instance.flights[i].day == current_day) {
                rows.push_back(i);
                ids.push_back(instance.flights[i].id);
                day_flights.push_back(instance.flights[i]);
            }

        TimelineNetwork net;
        if (kind == ModelKind::Ilp) net = build_timeline(day_flights);

        std::vector<std::size_t> choice(rows.size(), 0);
        std::optional<Cents> best;
        std::vector<std::size_t> best_choice;
        bool done = rows.empty();
        while (!done) {
            ++candidates;
            std::vector<long long> count(eta, 0);
            Cents cost = 0;
            for (std::size_t p = 0; p < rows.size(); ++p) {
                ++count[choice[p]];
                cost += effective_cost_cents(instance, rows[p], static_cast<int>(choice[p]));
            }
            bool ok = true;
            for (std::size_t j = 0; j < eta; ++j)
                if (count[j] > instance.fleets[j].available) ok = false;
            if (ok && kind == ModelKind::Ilp) {
                Assignment a;
                for (std::size_t p = 0; p < rows.size(); ++p)
                    a.fleet_of[ids[p]] = static_cast<int>(choice[p]);
                auto need = minimal_initials(net, a, eta);
                for (std::size_t j = 0; j < eta && ok; ++j) {
                    long long need_total = 0;
                    for (const auto& per_airport : need) need_total += per_airport[j];
                    if (need_total > instance.fleets[j].available) ok = false;
                }
            }
            if (ok && (!best || cost < *best)) {
                best = cost;
                best_choice = choice;
            }
            // odometer: the last flight spins fastest, so enumeration order
            // is lexicographic and the first optimum found is the
            // lowest-fleet-index one
            done = true;
            for (std::size_t p = rows.size(); p-- > 0;) {
                if (++choice[p] < eta) {
                    done = false;
                    break;
                }
                choice[p] = 0;
            }
        }

        if (!rows.empty() && !best) {
            report.status = SolveStatus::Infeasible;
            report.wall_time = seconds_since(start);
            if (stats) stats->candidates = candidates;
            return report;
        }
        if (best) {
            total += *best;
            for (std::size_t p = 0; p < rows.size(); ++p)
                assignment.fleet_of[ids[p]] = static_cast<int>(best_choice[p]);
        }
    }

    if (stats) stats->candidates = std::max<unsigned long long>(candidates, 1);
    report.status = SolveStatus::Optimal;
    report.objective = to_currency(total);
    report.bound = report.objective;
    report.assignment = std::move(assignment);
    report.wall_time = seconds_since(start);
    return report;
}

}  // namespace fleetopt
