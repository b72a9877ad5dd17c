#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fleetopt/model_blp.hpp"
#include "fleetopt/model_ilp.hpp"
#include "fleetopt/types.hpp"

namespace fleetopt {

enum class VarKind { Binary, Integer };

// Where a model variable came from, so solver output can be lifted back into
// an Assignment without string parsing.
struct VarTag {
    enum class Role { FlightFleet, NodeFleet, InitialFleet };
    Role role = Role::FlightFleet;
    long long key = 0;   // flight id / node index / airport index
    int fleet = 0;
};

struct ModelVariable {
    std::string name;
    VarKind kind = VarKind::Binary;
    long long lo = 0;
    long long hi = 1;
    std::optional<VarTag> tag;
};

enum class ConstraintSense { Eq, Le };

struct LinearTerm {
    int var = 0;
    long long coef = 0;
};

struct LinearConstraint {
    std::vector<LinearTerm> terms;
    ConstraintSense sense = ConstraintSense::Eq;
    long long rhs = 0;
    std::string label;
};

// Constrained model with a linear (optionally quadratic) cents objective over
// binary/bounded-integer variables and linear constraints.
struct QuadraticModel {
    std::vector<ModelVariable> variables;
    Cents objective_offset = 0;
    std::vector<std::pair<int, Cents>> objective_linear;        // (var, coef)
    std::map<std::pair<int, int>, Cents> objective_quadratic;   // canonical i < j
    std::vector<LinearConstraint> constraints;
};

Cents model_objective_cents(const QuadraticModel& model, const std::vector<long long>& values);
bool model_feasible(const QuadraticModel& model, const std::vector<long long>& values);

QuadraticModel from_blp(const BlpModel& model);
QuadraticModel from_day(const DayProblem& day);
QuadraticModel from_ilp(const IlpModel& model);

// Unconstrained binary form of a QuadraticModel.  Integer variables are
// log-encoded; every constraint becomes a squared-residual penalty, with
// inequalities first padded by a log-encoded slack.  With the automatic
// penalty (2 * objective spread + 1) every ground state decodes to a feasible
// optimum of the source model.
struct QuboForm {
    struct Bit {
        std::string name;
        int model_var = -1;      // -1 for constraint slack bits
        long long weight = 1;    // contribution to the encoded integer
        int constraint = -1;     // owning constraint for slack bits
    };

    std::vector<Bit> binary_vars;
    // Canonical upper-triangle coefficients; (i, i) holds the linear term.
    std::map<std::pair<int, int>, Cents> coefficients;
    Cents offset = 0;
    std::vector<Cents> penalty_weights;   // per source constraint
    QuadraticModel model;                 // decode / feasibility context
    Cents energy_scale = 1;               // characteristic objective delta (for samplers)

    std::size_t bit_count() const { return binary_vars.size(); }
    // Total over all bit vectors: model-variable values implied by the bits.
    std::vector<long long> decode(const std::vector<std::uint8_t>& bits) const;
    Cents energy(const std::vector<std::uint8_t>& bits) const;
};

// base_penalty in currency units; unset selects the automatic exact value.
QuboForm to_qubo(const QuadraticModel& model, std::optional<double> base_penalty = {});

// "i j coefficient" lines (i <= j) on stable variable order, offset up top.
void write_qubo(const QuboForm& qubo, const std::filesystem::path& path);

}  // namespace fleetopt
