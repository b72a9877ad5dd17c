#include "fleetopt/anneal.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>

#include "fleetopt/domain.hpp"

namespace fleetopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// splitmix-style stream split so restarts (and days) get unrelated seeds
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Beyond this exp(-z) is far below any drawn uniform, so larger uphill
// deltas are rejected without touching the RNG or libm.
constexpr double kZCut = 24.0;
constexpr std::size_t kTableSize = 4096;

// exp(-z) sampled at bucket midpoints; the quantization error (~0.3% of the
// acceptance probability) is invisible next to sampling noise and buys back
// a libm exp call on the hot path
const std::array<double, kTableSize>& acceptance_table() {
    static const std::array<double, kTableSize> table = [] {
        std::array<double, kTableSize> t{};
        for (std::size_t i = 0; i < kTableSize; ++i)
            t[i] = std::exp(-(static_cast<double>(i) + 0.5) * (kZCut / kTableSize));
        return t;
    }();
    return table;
}

// symmetric quadratic terms as flat adjacency rows, diagonal split off
struct Adjacency {
    std::vector<std::size_t> offsets;
    std::vector<int> targets;
    std::vector<Cents> weights;
    std::vector<Cents> diag;
};

Adjacency build_adjacency(const QuboForm& qubo) {
    const std::size_t bits = qubo.bit_count();
    Adjacency adj;
    adj.diag.assign(bits, 0);
    std::vector<std::size_t> degree(bits, 0);
    for (const auto& [key, w] : qubo.coefficients) {
        if (key.first == key.second) {
            adj.diag[static_cast<std::size_t>(key.first)] += w;
        } else {
            ++degree[static_cast<std::size_t>(key.first)];
            ++degree[static_cast<std::size_t>(key.second)];
        }
    }
    adj.offsets.assign(bits + 1, 0);
    for (std::size_t b = 0; b < bits; ++b) adj.offsets[b + 1] = adj.offsets[b] + degree[b];
    adj.targets.resize(adj.offsets[bits]);
    adj.weights.resize(adj.offsets[bits]);
    std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
    for (const auto& [key, w] : qubo.coefficients) {
        if (key.first == key.second) continue;
        const auto i = static_cast<std::size_t>(key.first);
        const auto j = static_cast<std::size_t>(key.second);
        adj.targets[cursor[i]] = key.second;
        adj.weights[cursor[i]++] = w;
        adj.targets[cursor[j]] = key.first;
        adj.weights[cursor[j]++] = w;
    }
    return adj;
}

// Model-space bookkeeping per bit: objective delta plus the constraint rows
// the bit feeds, so feasibility of the decoded state is known after every
// flip without re-decoding.  Slack bits deliberately have empty rows - they
// exist only inside the penalty terms, not in the source model.
struct ModelTracking {
    bool objective_is_linear = true;  // quadratic objectives disable tracking
    Cents objective_base = 0;         // decoded objective with all bits clear
    std::vector<Cents> objective_delta;
    std::vector<std::size_t> offsets;
    std::vector<int> constraint_of;
    std::vector<long long> weight;
    std::vector<long long> residual_base;  // lhs - rhs with all bits clear
    std::vector<std::uint8_t> equality;    // sense per constraint
};

ModelTracking build_tracking(const QuboForm& qubo) {
    const QuadraticModel& model = qubo.model;
    const std::size_t bits = qubo.bit_count();
    ModelTracking t;
    t.objective_is_linear = model.objective_quadratic.empty();
    t.objective_base = model_objective_cents(model, qubo.decode(std::vector<std::uint8_t>(bits, 0)));

    std::vector<Cents> coef_of(model.variables.size(), 0);
    for (const auto& [v, coef] : model.objective_linear) coef_of[static_cast<std::size_t>(v)] += coef;
    t.objective_delta.assign(bits, 0);
    std::vector<std::vector<int>> bits_of_var(model.variables.size());
    for (std::size_t b = 0; b < bits; ++b) {
        const QuboForm::Bit& bit = qubo.binary_vars[b];
        if (bit.model_var < 0) continue;
        t.objective_delta[b] = coef_of[static_cast<std::size_t>(bit.model_var)] * bit.weight;
        bits_of_var[static_cast<std::size_t>(bit.model_var)].push_back(static_cast<int>(b));
    }

    t.residual_base.assign(model.constraints.size(), 0);
    t.equality.assign(model.constraints.size(), 0);
    std::vector<std::vector<std::pair<int, long long>>> rows(bits);
    for (std::size_t ci = 0; ci < model.constraints.size(); ++ci) {
        const LinearConstraint& con = model.constraints[ci];
        t.equality[ci] = con.sense == ConstraintSense::Eq ? 1 : 0;
        long long base = -con.rhs;
        for (const LinearTerm& term : con.terms) {
            base += term.coef * model.variables[static_cast<std::size_t>(term.var)].lo;
            for (int b : bits_of_var[static_cast<std::size_t>(term.var)])
                rows[static_cast<std::size_t>(b)].emplace_back(
                    static_cast<int>(ci),
                    term.coef * qubo.binary_vars[static_cast<std::size_t>(b)].weight);
        }
        t.residual_base[ci] = base;
    }
    t.offsets.assign(bits + 1, 0);
    for (std::size_t b = 0; b < bits; ++b) t.offsets[b + 1] = t.offsets[b] + rows[b].size();
    t.constraint_of.resize(t.offsets[bits]);
    t.weight.resize(t.offsets[bits]);
    for (std::size_t b = 0, k = 0; b < bits; ++b)
        for (const auto& [ci, w] : rows[b]) {
            t.constraint_of[k] = ci;
            t.weight[k++] = w;
        }
    return t;
}

struct RestartOutcome {
    std::vector<std::uint8_t> best_energy_state;
    Cents best_energy = 0;
    std::vector<std::uint8_t> best_feasible_state;  // empty when none visited
    std::vector<Cents> trace;
    bool truncated = false;
};

int violation(std::uint8_t equality, long long residual) {
    return equality ? residual != 0 : residual > 0;
}

RestartOutcome run_restart(const QuboForm& qubo, const Adjacency& adj,
                           const ModelTracking& tracking, const std::vector<double>& beta,
                           const std::vector<Cents>& hard_reject, std::uint64_t seed,
                           Clock::time_point deadline, bool want_trace, bool verify) {
    const std::size_t bits = qubo.bit_count();
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> state(bits);
    for (auto& b : state) b = static_cast<std::uint8_t>(rng() & 1);

    // absolute energy plus per-bit set-deltas; pair couplings land twice in
    // the scan below, so they are summed separately and halved once
    Cents energy = qubo.offset;
    Cents pair_sum = 0;
    std::vector<Cents> field = adj.diag;
    for (std::size_t b = 0; b < bits; ++b) {
        Cents coupled = 0;
        for (std::size_t k = adj.offsets[b]; k < adj.offsets[b + 1]; ++k)
            if (state[static_cast<std::size_t>(adj.targets[k])]) coupled += adj.weights[k];
        field[b] += coupled;
        if (state[b]) {
            energy += adj.diag[b];
            pair_sum += coupled;
        }
    }
    energy += pair_sum / 2;

    std::vector<long long> residual = tracking.residual_base;
    Cents objective = tracking.objective_base;
    for (std::size_t b = 0; b < bits; ++b)
        if (state[b]) {
            objective += tracking.objective_delta[b];
            for (std::size_t k = tracking.offsets[b]; k < tracking.offsets[b + 1]; ++k)
                residual[static_cast<std::size_t>(tracking.constraint_of[k])] += tracking.weight[k];
        }
    long long violated = 0;
    for (std::size_t c = 0; c < residual.size(); ++c)
        violated += violation(tracking.equality[c], residual[c]);

    RestartOutcome out;
    out.best_energy = energy;
    out.best_energy_state = state;
    Cents best_feasible = std::numeric_limits<Cents>::max();
    if (violated == 0 && tracking.objective_is_linear) {
        best_feasible = objective;
        out.best_feasible_state = state;
    }

    const Cents scale = std::max<Cents>(1, qubo.energy_scale);
    const double inv_scale = 1.0 / static_cast<double>(scale);
    const auto& accept = acceptance_table();
    const double z_to_index = static_cast<double>(kTableSize) / kZCut;

    const auto sweeps = static_cast<long long>(beta.size());
    for (long long s = 0; s < sweeps; ++s) {
        if (Clock::now() > deadline) {
            out.truncated = true;
            break;
        }
        const double beta_s = beta[static_cast<std::size_t>(s)];
        const Cents hard = hard_reject[static_cast<std::size_t>(s)];
        for (std::size_t b = 0; b < bits; ++b) {
            const Cents delta = state[b] ? -field[b] : field[b];
            if (delta > 0) {
                if (delta > hard) continue;
                const double z = beta_s * static_cast<double>(delta) * inv_scale;
                if (z >= kZCut) continue;
                const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                if (u >= accept[static_cast<std::size_t>(z * z_to_index)]) continue;
            }

            const std::uint8_t now_set = state[b] ^ 1u;
            state[b] = now_set;
            energy += delta;
            if (now_set) {
                for (std::size_t k = adj.offsets[b]; k < adj.offsets[b + 1]; ++k)
                    field[static_cast<std::size_t>(adj.targets[k])] += adj.weights[k];
                objective += tracking.objective_delta[b];
            } else {
                for (std::size_t k = adj.offsets[b]; k < adj.offsets[b + 1]; ++k)
                    field[static_cast<std::size_t>(adj.targets[k])] -= adj.weights[k];
                objective -= tracking.objective_delta[b];
            }
            for (std::size_t k = tracking.offsets[b]; k < tracking.offsets[b + 1]; ++k) {
                const auto c = static_cast<std::size_t>(tracking.constraint_of[k]);
                const long long before = residual[c];
                const long long after = before + (now_set ? tracking.weight[k] : -tracking.weight[k]);
                residual[c] = after;
                violated += violation(tracking.equality[c], after) -
                            violation(tracking.equality[c], before);
            }

            if (energy < out.best_energy) {
                out.best_energy = energy;
                out.best_energy_state = state;
            }
            if (violated == 0 && tracking.objective_is_linear && objective < best_feasible) {
                best_feasible = objective;
                out.best_feasible_state = state;
            }
        }
        if (verify && qubo.energy(state) != energy)
            throw ModelError("incremental energy diverged from full re-evaluation");
        if (want_trace) out.trace.push_back(out.best_energy);
    }
    return out;
}

}  // namespace

long long default_sweeps(std::size_t bits) {
    if (bits == 0) return 1;
    return std::max<long long>(1, std::llround(2000.0 * std::sqrt(static_cast<double>(bits))));
}

SolveReport anneal(const QuboForm& qubo, const AnnealConfig& config, const RepairHook& repair_hook,
                   std::optional<Cents> optimal_bound, AnnealStats* stats) {
    if (config.restarts < 1) throw std::invalid_argument("anneal: restarts must be >= 1");
    if (config.sweeps < 0) throw std::invalid_argument("anneal: sweeps must be >= 1");
    if (!(config.beta_start > 0.0) || !(config.beta_end > config.beta_start))
        throw std::invalid_argument("anneal: need 0 < beta_start < beta_end");

    const auto start = Clock::now();
    auto deadline = Clock::time_point::max();
    if (std::isfinite(config.time_limit))
        deadline = start + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(config.time_limit));

    const std::size_t bits = qubo.bit_count();
    struct Candidate {
        Cents cost = 0;
        std::vector<long long> values;
    };
    std::optional<Candidate> best;
    auto consider = [&](const std::vector<std::uint8_t>& bit_state) {
        std::vector<long long> values = qubo.decode(bit_state);
        if (repair_hook && !repair_hook(values)) return false;
        if (!model_feasible(qubo.model, values)) return false;
        const Cents cost = model_objective_cents(qubo.model, values);
        if (!best || cost < best->cost) best = Candidate{cost, std::move(values)};
        return true;
    };

    bool truncated = false;
    int feasible_restarts = 0;
    if (bits == 0) {
        if (consider(std::vector<std::uint8_t>{})) feasible_restarts = 1;
        if (stats) stats->feasible_restarts = feasible_restarts;
    } else {
        const long long sweeps = config.sweeps > 0 ? config.sweeps : default_sweeps(bits);
        const long long steps =
            config.beta_steps > 0 ? std::min(config.beta_steps, sweeps) : sweeps;
        const Cents scale = std::max<Cents>(1, qubo.energy_scale);
        const double ratio = config.beta_end / config.beta_start;
        std::vector<double> beta(static_cast<std::size_t>(sweeps));
        std::vector<Cents> hard(static_cast<std::size_t>(sweeps));
        for (long long s = 0; s < sweeps; ++s) {
            const long long step = s * steps / sweeps;
            const double t =
                steps == 1 ? 1.0 : static_cast<double>(step) / static_cast<double>(steps - 1);
            beta[static_cast<std::size_t>(s)] = config.beta_start * std::pow(ratio, t);
            const double h =
                std::ceil(kZCut * static_cast<double>(scale) / beta[static_cast<std::size_t>(s)]);
            hard[static_cast<std::size_t>(s)] =
                h > 8.0e18 ? std::numeric_limits<Cents>::max() : static_cast<Cents>(h);
        }

        const Adjacency adj = build_adjacency(qubo);
        const ModelTracking tracking = build_tracking(qubo);

        std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
        auto run_one = [&](int r) {
            return run_restart(qubo, adj, tracking, beta, hard,
                               mix_seed(config.seed, static_cast<std::uint64_t>(r)), deadline,
                               stats != nullptr && r == 0, config.verify_energy);
        };
        int workers = config.workers > 0
                          ? config.workers
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        workers = std::min(workers, config.restarts);
        if (workers <= 1) {
            for (int r = 0; r < config.restarts; ++r)
                outcomes[static_cast<std::size_t>(r)] = run_one(r);
        } else {
            for (int base = 0; base < config.restarts; base += workers) {
                const int limit = std::min(config.restarts, base + workers);
                std::vector<std::future<RestartOutcome>> batch;
                for (int r = base; r < limit; ++r)
                    batch.push_back(std::async(std::launch::async, run_one, r));
                for (int r = base; r < limit; ++r)
                    outcomes[static_cast<std::size_t>(r)] = batch[static_cast<std::size_t>(r - base)].get();
            }
        }

        // merge in restart order; strict improvement keeps the earliest
        // restart (and within one, the repaired best-energy state) on ties
        for (const RestartOutcome& outcome : outcomes) {
            truncated = truncated || outcome.truncated;
            bool contributed = consider(outcome.best_energy_state);
            if (!outcome.best_feasible_state.empty())
                contributed = consider(outcome.best_feasible_state) || contributed;
            if (contributed) ++feasible_restarts;
        }
        if (stats) {
            stats->best_energy_trace = std::move(outcomes[0].trace);
            stats->feasible_restarts = feasible_restarts;
        }
    }

    SolveReport report;
    report.wall_time = seconds_since(start);
    if (!best) {
        report.status = truncated ? SolveStatus::TimedOut : SolveStatus::Infeasible;
        return report;
    }
    report.objective = to_currency(best->cost);
    report.status = optimal_bound && best->cost == *optimal_bound ? SolveStatus::Optimal
                                                                  : SolveStatus::Feasible;
    if (optimal_bound) report.bound = to_currency(*optimal_bound);

    Assignment assignment;
    std::map<std::pair<int, int>, int> grounded;
    bool any_node = false;
    for (std::size_t v = 0; v < qubo.model.variables.size(); ++v) {
        const auto& tag = qubo.model.variables[v].tag;
        if (!tag) continue;
        const long long value = best->values[v];
        if (tag->role == VarTag::Role::FlightFleet) {
            if (value == 1) assignment.fleet_of[tag->key] = tag->fleet;
        } else if (tag->role == VarTag::Role::NodeFleet) {
            grounded[{static_cast<int>(tag->key), tag->fleet}] = static_cast<int>(value);
            any_node = true;
        }
    }
    if (any_node) assignment.grounded = std::move(grounded);
    report.assignment = std::move(assignment);
    return report;
}

bool repair_day_values(const DayProblem& day, std::vector<long long>& values) {
    const std::size_t F = day.flight_count();
    const std::size_t eta = day.fleet_count();
    if (values.size() < F * eta)
        throw std::invalid_argument("repair: value vector shorter than the day layout");
    long long seats = 0;
    for (int c : day.fleet_caps) seats += c;
    if (seats < static_cast<long long>(F)) return false;

    std::vector<int> chosen(F, -1);
    std::vector<int> count(eta, 0);
    std::vector<std::size_t> broken;
    for (std::size_t i = 0; i < F; ++i) {
        int hits = 0, only = -1;
        for (std::size_t j = 0; j < eta; ++j)
            if (values[i * eta + j] != 0) {
                ++hits;
                only = static_cast<int>(j);
            }
        if (hits == 1) {
            chosen[i] = only;
            ++count[static_cast<std::size_t>(only)];
        } else {
            broken.push_back(i);
        }
    }

    // flights with no or several fleets: cheapest choice that respects the
    // caps, falling back to cheapest overall (cap repair mops up afterwards);
    // several set fleets restrict the choice to those already set
    for (std::size_t i : broken) {
        int hits = 0;
        for (std::size_t j = 0; j < eta; ++j)
            if (values[i * eta + j] != 0) ++hits;
        int pick = -1;
        for (int respect_caps = 1; respect_caps >= 0 && pick < 0; --respect_caps)
            for (std::size_t j = 0; j < eta; ++j) {
                if (hits >= 2 && values[i * eta + j] == 0) continue;
                if (respect_caps && count[j] >= day.fleet_caps[j]) continue;
                if (pick < 0 || day.ec(i, j) < day.ec(i, static_cast<std::size_t>(pick)))
                    pick = static_cast<int>(j);
            }
        chosen[i] = pick;
        ++count[static_cast<std::size_t>(pick)];
    }

    // cap repair: repeatedly take the globally cheapest single move from an
    // over-committed fleet to one with room (ties: lowest flight, then fleet)
    while (true) {
        bool over = false;
        for (std::size_t j = 0; j < eta; ++j)
            if (count[j] > day.fleet_caps[j]) over = true;
        if (!over) break;
        std::size_t move_flight = F;
        int move_to = -1;
        Cents move_delta = 0;
        for (std::size_t i = 0; i < F; ++i) {
            const auto j = static_cast<std::size_t>(chosen[i]);
            if (count[j] <= day.fleet_caps[j]) continue;
            for (std::size_t k = 0; k < eta; ++k) {
                if (count[k] >= day.fleet_caps[k]) continue;
                const Cents delta = day.ec(i, k) - day.ec(i, j);
                if (move_flight == F || delta < move_delta)
                    move_flight = i, move_to = static_cast<int>(k), move_delta = delta;
            }
        }
        if (move_flight == F) return false;  // unreachable once seats >= F
        --count[static_cast<std::size_t>(chosen[move_flight])];
        chosen[move_flight] = move_to;
        ++count[static_cast<std::size_t>(move_to)];
    }

    std::fill(values.begin(), values.begin() + static_cast<long long>(F * eta), 0);
    for (std::size_t i = 0; i < F; ++i)
        values[i * eta + static_cast<std::size_t>(chosen[i])] = 1;
    return true;
}

void polish_day_values(const DayProblem& day, std::vector<long long>& values) {
    const std::size_t F = day.flight_count();
    const std::size_t eta = day.fleet_count();
    if (values.size() < F * eta)
        throw std::invalid_argument("polish: value vector shorter than the day layout");

    // polish only polishes: anything but a clean one-fleet-per-flight layout
    // is left for repair and returned untouched
    std::vector<int> chosen(F, -1);
    std::vector<int> count(eta, 0);
    for (std::size_t i = 0; i < F; ++i) {
        for (std::size_t j = 0; j < eta; ++j)
            if (values[i * eta + j] != 0) {
                if (chosen[i] >= 0) return;
                chosen[i] = static_cast<int>(j);
            }
        if (chosen[i] < 0) return;
        ++count[static_cast<std::size_t>(chosen[i])];
    }

    // Cheapest single reassignment for every ordered fleet pair; chains and
    // rotations are then assembled from these arcs.  Flights on the chain are
    // automatically distinct because their source fleets are.
    const Cents none = std::numeric_limits<Cents>::max();
    std::vector<Cents> arc_cost(eta * eta);
    std::vector<std::size_t> arc_flight(eta * eta);
    const auto arc = [&](std::size_t a, std::size_t b) { return arc_cost[a * eta + b]; };
    const auto room = [&](std::size_t b) { return count[b] < day.fleet_caps[b]; };

    while (true) {
        std::fill(arc_cost.begin(), arc_cost.end(), none);
        for (std::size_t i = 0; i < F; ++i) {
            const auto j = static_cast<std::size_t>(chosen[i]);
            for (std::size_t k = 0; k < eta; ++k) {
                if (k == j) continue;
                const Cents delta = day.ec(i, k) - day.ec(i, j);
                if (delta < arc_cost[j * eta + k]) {
                    arc_cost[j * eta + k] = delta;
                    arc_flight[j * eta + k] = i;
                }
            }
        }

        // moves are (flight, destination) pairs; a plan is one chain/rotation
        Cents best = 0;
        std::array<std::pair<std::size_t, std::size_t>, 3> plan;
        std::size_t plan_len = 0;
        const auto offer = [&](Cents delta,
                               std::initializer_list<std::pair<std::size_t, std::size_t>> moves) {
            if (delta >= best) return;
            best = delta;
            plan_len = 0;
            for (const auto& m : moves) plan[plan_len++] = m;
        };
        for (std::size_t a = 0; a < eta; ++a)
            for (std::size_t b = 0; b < eta; ++b) {
                if (a == b || arc(a, b) == none) continue;
                const std::size_t iab = arc_flight[a * eta + b];
                if (room(b)) offer(arc(a, b), {{iab, b}});
                if (b > a && arc(b, a) != none)
                    offer(arc(a, b) + arc(b, a), {{iab, b}, {arc_flight[b * eta + a], a}});
                for (std::size_t c = 0; c < eta; ++c) {
                    if (c == a || c == b || arc(b, c) == none) continue;
                    const std::size_t ibc = arc_flight[b * eta + c];
                    if (room(c)) offer(arc(a, b) + arc(b, c), {{iab, b}, {ibc, c}});
                    if (c > a && arc(c, a) != none)
                        offer(arc(a, b) + arc(b, c) + arc(c, a),
                              {{iab, b}, {ibc, c}, {arc_flight[c * eta + a], a}});
                }
            }
        if (plan_len == 0) break;
        for (std::size_t m = 0; m < plan_len; ++m) {
            const auto [i, to] = plan[m];
            --count[static_cast<std::size_t>(chosen[i])];
            chosen[i] = static_cast<int>(to);
            ++count[to];
        }
    }

    std::fill(values.begin(), values.begin() + static_cast<long long>(F * eta), 0);
    for (std::size_t i = 0; i < F; ++i)
        values[i * eta + static_cast<std::size_t>(chosen[i])] = 1;
}

namespace {

// Penalty sized for sampling instead of proof: barriers a few reassignment
// steps tall keep one-hot configurations reachable from each other early in
// the schedule, while the late freeze still lands on feasible states.  The
// provably-exact automatic penalty towers orders of magnitude over the
// per-flight cost deltas and would freeze the chain at beta_start; repair
// covers whatever violations survive.
double sampling_penalty(const DayProblem& day) {
    const std::size_t F = day.flight_count();
    const std::size_t eta = day.fleet_count();
    if (F == 0 || eta < 2) return 1.0;
    Cents total_gap = 0;
    for (std::size_t i = 0; i < F; ++i) {
        Cents cheapest = std::numeric_limits<Cents>::max();
        Cents second = cheapest;
        for (std::size_t j = 0; j < eta; ++j) {
            const Cents c = day.ec(i, j);
            if (c < cheapest) {
                second = cheapest;
                cheapest = c;
            } else if (c < second) {
                second = c;
            }
        }
        total_gap += second - cheapest;
    }
    const Cents mean_gap = total_gap / static_cast<Cents>(F);
    return static_cast<double>(std::max<Cents>(4 * mean_gap, 100)) / 100.0;
}

// The raw day objective carries each flight's full operating cost, but the
// sampler only ever decides *which* fleet flies it.  Rebase every row so the
// cheapest fleet costs zero and park the removed baseline in the constant
// offset: reported costs stay exact, while the coefficient spread - and with
// it the temperature normalization derived from it - now measures the deltas
// the chain is actually choosing between.  Without this the baseline noise
// drowns out the decisions and the schedule never freezes.
QuadraticModel rebased_day_model(const DayProblem& day) {
    QuadraticModel model = from_day(day);
    const std::size_t eta = day.fleet_count();
    for (std::size_t i = 0; i < day.flight_count(); ++i) {
        Cents floor = day.ec(i, 0);
        for (std::size_t j = 1; j < eta; ++j) floor = std::min(floor, day.ec(i, j));
        for (std::size_t j = 0; j < eta; ++j)
            model.objective_linear[i * eta + j].second -= floor;
        model.objective_offset += floor;
    }
    return model;
}

}  // namespace

SolveReport solve_blp_anneal(const Instance& instance, const BlpModel& model,
                             const AnnealConfig& config) {
    const auto start = Clock::now();
    SolveReport report;
    Assignment merged;
    for (std::size_t d = 0; d < model.day_problems.size(); ++d) {
        const DayProblem& day = model.day_problems[d];
        if (day.capacity_infeasible) {
            report.status = SolveStatus::Infeasible;
            report.wall_time = seconds_since(start);
            return report;
        }
        const QuboForm qubo = to_qubo(rebased_day_model(day), sampling_penalty(day));
        AnnealConfig day_config = config;
        day_config.seed = mix_seed(config.seed, d);
        if (std::isfinite(config.time_limit)) {
            // share what is left of the budget evenly over the remaining days
            const double remaining = config.time_limit - seconds_since(start);
            day_config.time_limit =
                remaining / static_cast<double>(model.day_problems.size() - d);
        }
        RepairHook hook;
        if (config.repair)
            hook = [&day](std::vector<long long>& values) {
                if (!repair_day_values(day, values)) return false;
                polish_day_values(day, values);
                return true;
            };
        const SolveReport day_report = anneal(qubo, day_config, hook);
        if (day_report.status != SolveStatus::Feasible &&
            day_report.status != SolveStatus::Optimal) {
            report.status = day_report.status;
            report.wall_time = seconds_since(start);
            return report;
        }
        for (const auto& [flight, fleet] : day_report.assignment->fleet_of)
            merged.fleet_of[flight] = fleet;
    }
    report.status = SolveStatus::Feasible;
    report.objective = to_currency(evaluate_objective_cents(instance, merged));
    report.assignment = std::move(merged);
    report.wall_time = seconds_since(start);
    return report;
}

SolveReport solve_ilp_anneal(const Instance& instance, const IlpModel& model,
                             const AnnealConfig& config) {
    const auto start = Clock::now();
    SolveReport report;
    const std::size_t eta = model.fleet_count();
    const std::size_t F = model.flight_count();

    DayProblem day;
    day.day = instance.days.empty() ? 1 : instance.days.front();
    day.flight_ids = model.network.flight_ids;
    day.effective_cost = model.effective_cost;
    day.fleet_caps = model.fleet_caps;

    long long seats = 0;
    for (int c : day.fleet_caps) seats += c;
    if (seats < static_cast<long long>(F)) {
        report.status = SolveStatus::Infeasible;
        report.wall_time = seconds_since(start);
        return report;
    }

    const QuboForm qubo = to_qubo(rebased_day_model(day), sampling_penalty(day));
    // balance feasibility is not in the QUBO: restarts whose assignments need
    // more initial aircraft than the fleet owns are rejected outright
    RepairHook hook = [&day, &model, eta, do_repair = config.repair](
                          std::vector<long long>& values) {
        if (do_repair) {
            if (!repair_day_values(day, values)) return false;
            polish_day_values(day, values);
        }
        Assignment a;
        for (std::size_t i = 0; i < day.flight_count(); ++i) {
            int hits = 0, only = -1;
            for (std::size_t j = 0; j < eta; ++j)
                if (values[i * eta + j] != 0) {
                    ++hits;
                    only = static_cast<int>(j);
                }
            if (hits != 1) return false;
            a.fleet_of[day.flight_ids[i]] = only;
        }
        const auto need = minimal_initials(model.network, a, eta);
        for (std::size_t j = 0; j < eta; ++j) {
            long long total = 0;
            for (const auto& per_airport : need) total += per_airport[j];
            if (total > model.fleet_caps[j]) return false;
        }
        return true;
    };

    const SolveReport inner = anneal(qubo, config, hook);
    if (inner.status != SolveStatus::Feasible && inner.status != SolveStatus::Optimal) {
        report.status = inner.status;
        report.wall_time = seconds_since(start);
        return report;
    }

    Assignment assignment = *inner.assignment;
    const auto initial = minimal_initials(model.network, assignment, eta);
    const auto propagation = propagate_grounded(model.network, assignment, initial, eta);
    std::map<std::pair<int, int>, int> grounded;
    for (std::size_t k = 0; k < propagation.at_node.size(); ++k)
        for (std::size_t j = 0; j < eta; ++j)
            grounded[{static_cast<int>(k), static_cast<int>(j)}] = propagation.at_node[k][j];
    assignment.grounded = std::move(grounded);

    report.status = SolveStatus::Feasible;
    report.objective = to_currency(evaluate_objective_cents(instance, assignment));
    report.assignment = std::move(assignment);
    report.wall_time = seconds_since(start);
    return report;
}

}  // namespace fleetopt
