#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fleetopt/anneal.hpp"
#include "fleetopt/domain.hpp"
#include "fleetopt/exact.hpp"
#include "fleetopt/ingest.hpp"
#include "fleetopt/types.hpp"

namespace fleetopt {

struct BenchRow {
    std::string label;                  // "(flights_per_day,fleets,days)" or "(flights,fleets)"
    long long variables = 0;
    long long constraints = 0;
    std::optional<double> exact_cost;   // unset renders the status text instead
    std::optional<double> anneal_cost;
    std::string exact_status = "Optimal";
    std::string anneal_status = "Feasible";
    double exact_time = 0.0;            // seconds around the solve call only
    double anneal_time = 0.0;
    std::optional<double> gap;          // (anneal - exact) / exact
    std::string error;                  // row-level failure note; row still emitted
};

struct SuiteConfig {
    ModelKind kind = ModelKind::Blp;
    std::vector<GeneratorConfig> instances;
    AnnealConfig anneal;
    ExactConfig exact;
    int workers = 1;                    // rows solved concurrently
};

// Default benchmark ladders (four fleets; 7 days for the multi-day model).
// The desk-scale ladder stops at 368 flights/day; `large` appends the sizes
// that need a long lunch.
std::vector<GeneratorConfig> default_ladder(ModelKind kind, std::uint64_t seed, bool large = false);

std::optional<double> compute_gap(std::optional<double> exact_cost,
                                  std::optional<double> anneal_cost);

// Generates, builds, and solves every configured instance with both backends.
// A row failure is recorded on the row; remaining rows still run.
std::vector<BenchRow> run_suite(const SuiteConfig& config);

struct ReportPaths {
    std::filesystem::path csv;
    std::filesystem::path json;
    std::vector<std::filesystem::path> plot_data;
};

// bench.csv + bench.json + per-metric .dat plot files (x = total flights).
// File bodies carry no timestamps, so reruns with equal seeds are
// byte-identical outside the time columns.
ReportPaths write_report(const std::vector<BenchRow>& rows, const SuiteConfig& config,
                         const std::filesystem::path& dir);

// Graphviz view of one assignment: airports as nodes, one edge per flight
// labeled "id@dep->arr", edge color keyed by assigned fleet.
void export_timeline_dot(const Instance& instance, const Assignment& assignment,
                         const std::filesystem::path& path,
                         std::optional<int> day = {});

}  // namespace fleetopt
