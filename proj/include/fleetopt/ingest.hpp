#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fleetopt/types.hpp"

namespace fleetopt {

struct FleetSpec {
    std::string name;
    int capacity = 0;
    int available = 0;
};

// Seeded synthetic-network generator.  Empty fleet_spec/airports fall back to
// the defaults below.  demand_range must stay within [0, 400] passengers;
// cost_range is an inclusive currency interval held in cents.
struct GeneratorConfig {
    int flights_per_day = 46;
    int days = 7;
    std::vector<FleetSpec> fleet_spec;
    std::vector<std::string> airports;
    std::pair<int, int> demand_range{100, 210};
    std::pair<Cents, Cents> cost_range{450000, 650000};
    std::uint64_t seed = 1;
};

// Four familiar narrow/wide-body types; availability scales with the daily
// flight count (exactly 10/15/15/8 at 46 flights per day).
std::vector<FleetSpec> default_fleet_spec(int flights_per_day);
const std::vector<std::string>& default_airports();

Instance generate_instance(const GeneratorConfig& config);

// Parse "H:MM:SS"/"HH:MM:SS" to minutes after midnight.  A single-digit hour
// below 6 lacks the explicit 24-hour leading zero and is read as afternoon
// shorthand (+12h); zero-padded hours are always literal.
int parse_schedule_time(const std::string& text);
std::string format_schedule_time(int minutes);

Cents parse_money(const std::string& text);
std::string format_money(Cents value);

// Join fleet/schedule/cost CSVs into one validated Instance.  Missing or
// duplicated (flight, fleet) cost rows, unknown fleet names, and duplicate
// flight ids are ModelErrors naming the offender; unreadable files are IoErrors.
Instance load_instance(const std::filesystem::path& fleet_csv,
                       const std::filesystem::path& schedule_csv,
                       const std::filesystem::path& cost_csv,
                       double lambda = 1.0);

struct SavedPaths {
    std::filesystem::path fleet;
    std::filesystem::path schedule;
    std::filesystem::path cost;
    std::filesystem::path manifest;
};

// Writes fleet.csv, schedule.csv, cost.csv and manifest.json into `dir`.
// load_instance(save_instance(x)) reproduces x exactly.
SavedPaths save_instance(const Instance& instance, const std::filesystem::path& dir);

// Convenience for the saved layout above; lambda/seed come from manifest.json.
Instance load_instance_dir(const std::filesystem::path& dir);

}  // namespace fleetopt
