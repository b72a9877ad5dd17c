#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fleetopt {

// All money is carried as integer cents so objective arithmetic is exact;
// values cross into doubles only at the reporting boundary.
using Cents = std::int64_t;

inline double to_currency(Cents c) { return static_cast<double>(c) / 100.0; }

// Raised when input data is malformed or inconsistent (bad CSV, missing cost
// rows, broken invariants).  Distinct from IoError so the CLI can map model
// problems and unreadable files to the same exit code but different messages.
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FleetType {
    int id = 0;            // dense index into Instance::fleets
    std::string name;      // e.g. "A330"
    int capacity = 0;      // seats per aircraft (Q_j)
    int available = 0;     // airframes of this type per day (N_j)

    bool operator==(const FleetType&) const = default;
};

struct Flight {
    long long id = 0;
    std::string origin;
    std::string destination;
    int departure = 0;     // minutes after midnight, [0, 1440)
    int arrival = 0;       // minutes after midnight, [0, 1440)
    int demand = 0;        // forecast passengers (D_i)
    int day = 1;

    bool operator==(const Flight&) const = default;
};

// Dense (flight x fleet) table of operating costs in cents.  Entries default
// to "unset"; reading an unset entry is a model inconsistency, not a zero.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::size_t flights, std::size_t fleets)
        : fleets_(fleets), cells_(flights * fleets, kUnset) {}

    void set(std::size_t flight_row, std::size_t fleet, Cents value) {
        cells_.at(flight_row * fleets_ + fleet) = value;
    }
    bool has(std::size_t flight_row, std::size_t fleet) const {
        return cells_.at(flight_row * fleets_ + fleet) != kUnset;
    }
    Cents at(std::size_t flight_row, std::size_t fleet) const {
        Cents v = cells_.at(flight_row * fleets_ + fleet);
        if (v == kUnset)
            throw ModelError("cost entry missing for flight row " +
                             std::to_string(flight_row) + ", fleet " +
                             std::to_string(fleet));
        return v;
    }
    std::size_t fleet_stride() const { return fleets_; }

    bool operator==(const CostMatrix&) const = default;

private:
    static constexpr Cents kUnset = -1;
    std::size_t fleets_ = 0;
    std::vector<Cents> cells_;
};

// Provenance stamped on generated instances so a saved directory can be
// reproduced from its manifest alone.
struct GeneratorMeta {
    std::uint64_t seed = 0;
    int flights_per_day = 0;
    int days = 0;

    bool operator==(const GeneratorMeta&) const = default;
};

struct Instance {
    std::vector<FleetType> fleets;
    std::vector<Flight> flights;       // day-major order as loaded/generated
    CostMatrix costs;                  // rows aligned with `flights`
    std::vector<int> days;             // sorted distinct day indices
    double lambda = 1.0;               // weight of the (Q_j - D_i)^2 spill/void term
    std::optional<GeneratorMeta> meta;

    std::size_t fleet_count() const { return fleets.size(); }

    bool operator==(const Instance&) const = default;
};

// Throws ModelError when structural invariants are broken (duplicate flight
// ids, negative demand, empty fleet list, flight on an unlisted day, ...).
void validate(const Instance& instance);

struct Assignment {
    // flight id -> fleet id; the only decision the two models share.
    std::map<long long, int> fleet_of;
    // Aircraft-balance solutions also carry grounded counts per timeline
    // node: (node index, fleet id) -> aircraft on the ground after the event.
    std::optional<std::map<std::pair<int, int>, int>> grounded;

    bool operator==(const Assignment&) const = default;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, TimedOut };

const char* to_string(SolveStatus status);

struct SolveReport {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;            // currency units; meaningful unless Infeasible
    double wall_time = 0.0;            // seconds spent inside the solver
    std::optional<Assignment> assignment;  // present for Optimal/Feasible
    std::optional<double> bound;       // best proven lower bound, currency
};

}  // namespace fleetopt
