#include "fleetopt/cqm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace fleetopt {

namespace {

std::pair<int, int> canon(int i, int j) { return i <= j ? std::make_pair(i, j) : std::make_pair(j, i); }

void add_coef(std::map<std::pair<int, int>, Cents>& q, int i, int j, Cents value) {
    if (value == 0) return;
    auto key = canon(i, j);
    auto [it, inserted] = q.emplace(key, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0) q.erase(it);
    }
}

// Bit weights covering every integer in [0, range]: powers of two plus a
// remainder term, ceil(log2(range + 1)) bits in total.
std::vector<long long> log_weights(long long range) {
    std::vector<long long> weights;
    if (range <= 0) return weights;
    long long covered = 0;
    for (long long w = 1; covered + w <= range; w *= 2) {
        weights.push_back(w);
        covered += w;
    }
    if (covered < range) weights.push_back(range - covered);
    return weights;
}

}  // namespace

Cents model_objective_cents(const QuadraticModel& model, const std::vector<long long>& values) {
    Cents total = model.objective_offset;
    for (const auto& [var, coef] : model.objective_linear)
        total += coef * values.at(static_cast<std::size_t>(var));
    for (const auto& [pair, coef] : model.objective_quadratic)
        total += coef * values.at(static_cast<std::size_t>(pair.first)) *
                 values.at(static_cast<std::size_t>(pair.second));
    return total;
}

bool model_feasible(const QuadraticModel& model, const std::vector<long long>& values) {
    for (std::size_t v = 0; v < model.variables.size(); ++v)
        if (values.at(v) < model.variables[v].lo || values.at(v) > model.variables[v].hi)
            return false;
    for (const LinearConstraint& c : model.constraints) {
        long long lhs = 0;
        for (const LinearTerm& t : c.terms) lhs += t.coef * values.at(static_cast<std::size_t>(t.var));
        if (c.sense == ConstraintSense::Eq ? lhs != c.rhs : lhs > c.rhs) return false;
    }
    return true;
}

QuadraticModel from_day(const DayProblem& day) {
    QuadraticModel model;
    const std::size_t eta = day.fleet_count();

    for (std::size_t i = 0; i < day.flight_count(); ++i)
        for (std::size_t j = 0; j < eta; ++j) {
            ModelVariable v;
            v.name = "x[" + std::to_string(day.flight_ids[i]) + "," + std::to_string(j) + "]";
            v.tag = VarTag{VarTag::Role::FlightFleet, day.flight_ids[i], static_cast<int>(j)};
            const int idx = static_cast<int>(model.variables.size());
            model.variables.push_back(std::move(v));
            model.objective_linear.emplace_back(idx, day.ec(i, j));
        }

    for (std::size_t i = 0; i < day.flight_count(); ++i) {
        LinearConstraint c;
        c.sense = ConstraintSense::Eq;
        c.rhs = 1;
        c.label = "onehot[" + std::to_string(day.flight_ids[i]) + "]";
        for (std::size_t j = 0; j < eta; ++j)
            c.terms.push_back({static_cast<int>(i * eta + j), 1});
        model.constraints.push_back(std::move(c));
    }
    for (std::size_t j = 0; j < eta; ++j) {
        LinearConstraint c;
        c.sense = ConstraintSense::Le;
        c.rhs = day.fleet_caps[j];
        c.label = "cap[d" + std::to_string(day.day) + ",f" + std::to_string(j) + "]";
        for (std::size_t i = 0; i < day.flight_count(); ++i)
            c.terms.push_back({static_cast<int>(i * eta + j), 1});
        model.constraints.push_back(std::move(c));
    }
    return model;
}

QuadraticModel from_blp(const BlpModel& blp) {
    // Days share nothing, so the joint model is the disjoint union of the
    // per-day models with variable indices shifted.
    QuadraticModel model;
    for (const DayProblem& day : blp.day_problems) {
        QuadraticModel sub = from_day(day);
        const int base = static_cast<int>(model.variables.size());
        for (auto& v : sub.variables) model.variables.push_back(std::move(v));
        for (auto& [var, coef] : sub.objective_linear)
            model.objective_linear.emplace_back(var + base, coef);
        for (auto& c : sub.constraints) {
            for (auto& t : c.terms) t.var += base;
            model.constraints.push_back(std::move(c));
        }
    }
    return model;
}

QuadraticModel from_ilp(const IlpModel& ilp) {
    QuadraticModel model;
    const std::size_t eta = ilp.fleet_count();
    const std::size_t F = ilp.flight_count();
    const TimelineNetwork& net = ilp.network;

    for (std::size_t i = 0; i < F; ++i)
        for (std::size_t j = 0; j < eta; ++j) {
            ModelVariable v;
            v.name = "x[" + std::to_string(net.flight_ids[i]) + "," + std::to_string(j) + "]";
            v.tag = VarTag{VarTag::Role::FlightFleet, net.flight_ids[i], static_cast<int>(j)};
            const int idx = static_cast<int>(model.variables.size());
            model.variables.push_back(std::move(v));
            model.objective_linear.emplace_back(idx, ilp.ec(i, j));
        }
    auto x_var = [&](std::size_t i, std::size_t j) { return static_cast<int>(i * eta + j); };

    const int g_base = static_cast<int>(model.variables.size());
    for (std::size_t k = 0; k < net.node_count(); ++k)
        for (std::size_t j = 0; j < eta; ++j) {
            ModelVariable v;
            v.name = "G[" + std::to_string(k) + "," + std::to_string(j) + "]";
            v.kind = VarKind::Integer;
            v.lo = 0;
            v.hi = ilp.fleet_caps[j];
            v.tag = VarTag{VarTag::Role::NodeFleet, static_cast<long long>(k),
                           static_cast<int>(j)};
            model.variables.push_back(std::move(v));
        }
    auto g_var = [&](std::size_t k, std::size_t j) {
        return g_base + static_cast<int>(k * eta + j);
    };

    const int g0_base = static_cast<int>(model.variables.size());
    for (std::size_t a = 0; a < net.airports.size(); ++a)
        for (std::size_t j = 0; j < eta; ++j) {
            ModelVariable v;
            v.name = "G0[" + net.airports[a] + "," + std::to_string(j) + "]";
            v.kind = VarKind::Integer;
            v.lo = 0;
            v.hi = ilp.fleet_caps[j];
            v.tag = VarTag{VarTag::Role::InitialFleet, static_cast<long long>(a),
                           static_cast<int>(j)};
            model.variables.push_back(std::move(v));
        }
    auto g0_var = [&](std::size_t a, std::size_t j) {
        return g0_base + static_cast<int>(a * eta + j);
    };

    for (std::size_t i = 0; i < F; ++i) {
        LinearConstraint c;
        c.sense = ConstraintSense::Eq;
        c.rhs = 1;
        c.label = "onehot[" + std::to_string(net.flight_ids[i]) + "]";
        for (std::size_t j = 0; j < eta; ++j) c.terms.push_back({x_var(i, j), 1});
        model.constraints.push_back(std::move(c));
    }
    for (std::size_t j = 0; j < eta; ++j) {
        LinearConstraint c;
        c.sense = ConstraintSense::Le;
        c.rhs = ilp.fleet_caps[j];
        c.label = "cap[f" + std::to_string(j) + "]";
        for (std::size_t i = 0; i < F; ++i) c.terms.push_back({x_var(i, j), 1});
        model.constraints.push_back(std::move(c));
    }

    // balance: G_prev + arrival - departure - G_node = 0 along every chain,
    // with the airport's initial count standing in for G_prev at the head
    std::vector<std::size_t> flight_pos_by_node(net.node_count());
    for (std::size_t i = 0; i < F; ++i) {
        flight_pos_by_node[static_cast<std::size_t>(net.arrival_node_of[i])] = i;
        flight_pos_by_node[static_cast<std::size_t>(net.departure_node_of[i])] = i;
    }
    for (std::size_t a = 0; a < net.airport_chains.size(); ++a) {
        int prev = -1;
        for (int node : net.airport_chains[a]) {
            const TimelineNode& n = net.nodes[static_cast<std::size_t>(node)];
            const std::size_t i = flight_pos_by_node[static_cast<std::size_t>(node)];
            for (std::size_t j = 0; j < eta; ++j) {
                LinearConstraint c;
                c.sense = ConstraintSense::Eq;
                c.rhs = 0;
                c.label = "balance[n" + std::to_string(node) + ",f" + std::to_string(j) + "]";
                c.terms.push_back({prev < 0 ? g0_var(a, j)
                                            : g_var(static_cast<std::size_t>(prev), j),
                                   1});
                c.terms.push_back({x_var(i, j), n.kind == EventKind::Arrival ? 1 : -1});
                c.terms.push_back({g_var(static_cast<std::size_t>(node), j), -1});
                model.constraints.push_back(std::move(c));
            }
            prev = node;
        }
    }

    for (std::size_t j = 0; j < eta; ++j) {
        LinearConstraint c;
        c.sense = ConstraintSense::Le;
        c.rhs = ilp.fleet_caps[j];
        c.label = "initial_cap[f" + std::to_string(j) + "]";
        for (std::size_t a = 0; a < net.airports.size(); ++a)
            c.terms.push_back({g0_var(a, j), 1});
        model.constraints.push_back(std::move(c));
    }
    return model;
}

std::vector<long long> QuboForm::decode(const std::vector<std::uint8_t>& bits) const {
    std::vector<long long> values(model.variables.size());
    for (std::size_t v = 0; v < model.variables.size(); ++v) values[v] = model.variables[v].lo;
    for (std::size_t b = 0; b < binary_vars.size(); ++b) {
        const Bit& bit = binary_vars[b];
        if (bit.model_var >= 0 && bits.at(b))
            values[static_cast<std::size_t>(bit.model_var)] += bit.weight;
    }
    return values;
}

Cents QuboForm::energy(const std::vector<std::uint8_t>& bits) const {
    Cents total = offset;
    for (const auto& [key, coef] : coefficients) {
        if (key.first == key.second) {
            if (bits.at(static_cast<std::size_t>(key.first))) total += coef;
        } else if (bits.at(static_cast<std::size_t>(key.first)) &&
                   bits.at(static_cast<std::size_t>(key.second))) {
            total += coef;
        }
    }
    return total;
}

QuboForm to_qubo(const QuadraticModel& model, std::optional<double> base_penalty) {
    QuboForm qubo;
    qubo.model = model;

    // one bit per binary variable, a log-encoded ladder per integer
    std::vector<std::vector<int>> bits_of_var(model.variables.size());
    for (std::size_t v = 0; v < model.variables.size(); ++v) {
        const ModelVariable& var = model.variables[v];
        if (var.hi < var.lo)
            throw ModelError("variable " + var.name + " has an empty domain");
        if (var.kind == VarKind::Binary) {
            if (var.lo != 0 || var.hi != 1)
                throw ModelError("binary variable " + var.name + " must range over {0,1}");
            bits_of_var[v].push_back(static_cast<int>(qubo.binary_vars.size()));
            qubo.binary_vars.push_back({var.name, static_cast<int>(v), 1, -1});
            continue;
        }
        const long long range = var.hi - var.lo;
        if (var.hi == std::numeric_limits<long long>::max())
            throw ModelError("integer variable " + var.name + " is unbounded");
        if (range > (1 << 20))
            throw ModelError("integer variable " + var.name + " spans too wide a range");
        auto weights = log_weights(range);
        for (std::size_t b = 0; b < weights.size(); ++b) {
            bits_of_var[v].push_back(static_cast<int>(qubo.binary_vars.size()));
            qubo.binary_vars.push_back({var.name + "#" + std::to_string(b),
                                        static_cast<int>(v), weights[b], -1});
        }
    }

    // objective: substitute var = lo + sum(w_b * bit_b)
    for (const auto& [v, coef] : model.objective_linear) {
        const ModelVariable& var = model.variables.at(static_cast<std::size_t>(v));
        qubo.offset += coef * var.lo;
        for (int b : bits_of_var[static_cast<std::size_t>(v)])
            add_coef(qubo.coefficients, b, b,
                     coef * qubo.binary_vars[static_cast<std::size_t>(b)].weight);
    }
    for (const auto& [pair, coef] : model.objective_quadratic) {
        const auto& [u, v] = pair;
        const ModelVariable& vu = model.variables.at(static_cast<std::size_t>(u));
        const ModelVariable& vv = model.variables.at(static_cast<std::size_t>(v));
        qubo.offset += coef * vu.lo * vv.lo;
        for (int b : bits_of_var[static_cast<std::size_t>(u)])
            add_coef(qubo.coefficients, b, b,
                     coef * qubo.binary_vars[static_cast<std::size_t>(b)].weight * vv.lo);
        for (int c : bits_of_var[static_cast<std::size_t>(v)])
            add_coef(qubo.coefficients, c, c,
                     coef * qubo.binary_vars[static_cast<std::size_t>(c)].weight * vu.lo);
        for (int b : bits_of_var[static_cast<std::size_t>(u)])
            for (int c : bits_of_var[static_cast<std::size_t>(v)])
                if (b != c)
                    add_coef(qubo.coefficients, b, c,
                             coef * qubo.binary_vars[static_cast<std::size_t>(b)].weight *
                                 qubo.binary_vars[static_cast<std::size_t>(c)].weight);
    }

    // automatic penalty: one unit of squared violation must outweigh any
    // objective swing, so 2 * spread + 1 over the variable boxes is safe
    Cents penalty;
    if (base_penalty) {
        penalty = std::max<Cents>(1, std::llround(*base_penalty * 100.0));
    } else {
        Cents lo_sum = 0, hi_sum = 0;
        auto span = [&](Cents coef, long long a, long long b) {
            const Cents x = coef * a, y = coef * b;
            lo_sum += std::min(x, y);
            hi_sum += std::max(x, y);
        };
        for (const auto& [v, coef] : model.objective_linear) {
            const ModelVariable& var = model.variables.at(static_cast<std::size_t>(v));
            span(coef, var.lo, var.hi);
        }
        for (const auto& [pair, coef] : model.objective_quadratic) {
            const ModelVariable& vu = model.variables.at(static_cast<std::size_t>(pair.first));
            const ModelVariable& vv = model.variables.at(static_cast<std::size_t>(pair.second));
            Cents lo = coef * vu.lo * vv.lo, hi = lo;
            for (long long a : {vu.lo, vu.hi})
                for (long long b : {vv.lo, vv.hi}) {
                    lo = std::min<Cents>(lo, coef * a * b);
                    hi = std::max<Cents>(hi, coef * a * b);
                }
            lo_sum += lo;
            hi_sum += hi;
        }
        penalty = 2 * (hi_sum - lo_sum) + 1;
    }

    // each constraint contributes P * (expr - rhs + slack)^2 over its bits
    for (std::size_t ci = 0; ci < model.constraints.size(); ++ci) {
        const LinearConstraint& con = model.constraints[ci];
        qubo.penalty_weights.push_back(penalty);

        long long constant = -con.rhs;
        std::vector<std::pair<int, long long>> terms;  // (bit, weight in residual)
        for (const LinearTerm& t : con.terms) {
            const ModelVariable& var = model.variables.at(static_cast<std::size_t>(t.var));
            constant += t.coef * var.lo;
            for (int b : bits_of_var[static_cast<std::size_t>(t.var)])
                terms.emplace_back(b, t.coef *
                                          qubo.binary_vars[static_cast<std::size_t>(b)].weight);
        }
        if (con.sense == ConstraintSense::Le) {
            long long lhs_min = -con.rhs;
            for (const LinearTerm& t : con.terms) {
                const ModelVariable& var = model.variables.at(static_cast<std::size_t>(t.var));
                lhs_min += std::min(t.coef * var.lo, t.coef * var.hi);
            }
            const long long slack_range = std::max<long long>(0, -lhs_min);
            auto weights = log_weights(slack_range);
            for (std::size_t b = 0; b < weights.size(); ++b) {
                const int bit = static_cast<int>(qubo.binary_vars.size());
                qubo.binary_vars.push_back({"slack[" + con.label + "]#" + std::to_string(b),
                                            -1, weights[b], static_cast<int>(ci)});
                terms.emplace_back(bit, weights[b]);
            }
        }

        qubo.offset += penalty * constant * constant;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto& [bt, wt] = terms[t];
            add_coef(qubo.coefficients, bt, bt, penalty * (wt * wt + 2 * constant * wt));
            for (std::size_t u = t + 1; u < terms.size(); ++u) {
                const auto& [bu, wu] = terms[u];
                if (bt == bu)
                    add_coef(qubo.coefficients, bt, bt, 2 * penalty * wt * wu);
                else
                    add_coef(qubo.coefficients, bt, bu, 2 * penalty * wt * wu);
            }
        }
    }

    // characteristic objective delta, used by samplers to express temperature
    if (!model.objective_linear.empty()) {
        double mean = 0.0;
        for (const auto& [v, coef] : model.objective_linear)
            mean += static_cast<double>(coef);
        mean /= static_cast<double>(model.objective_linear.size());
        double var_sum = 0.0;
        for (const auto& [v, coef] : model.objective_linear) {
            const double d = static_cast<double>(coef) - mean;
            var_sum += d * d;
        }
        const double sd = std::sqrt(var_sum / static_cast<double>(model.objective_linear.size()));
        qubo.energy_scale = std::max<Cents>(1, std::llround(sd > 0.0 ? sd : std::abs(mean)));
    }
    return qubo;
}

void write_qubo(const QuboForm& qubo, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "# offset " << qubo.offset << '\n';
    for (const auto& [key, coef] : qubo.coefficients)
        out << key.first << ' ' << key.second << ' ' << coef << '\n';
}

}  // namespace fleetopt
