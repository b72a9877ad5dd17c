#include "fleetopt/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>

#include "json.hpp"

#include "fleetopt/model_blp.hpp"
#include "fleetopt/model_ilp.hpp"

namespace fleetopt {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

std::size_t effective_fleet_count(const GeneratorConfig& config) {
    return config.fleet_spec.empty() ? default_fleet_spec(config.flights_per_day).size()
                                     : config.fleet_spec.size();
}

std::string row_label(ModelKind kind, const GeneratorConfig& config) {
    std::string label = "(" + std::to_string(config.flights_per_day) + "," +
                        std::to_string(effective_fleet_count(config));
    if (kind == ModelKind::Blp) label += "," + std::to_string(config.days);
    return label + ")";
}

std::string fixed(double value, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

// cost cell: the amount when the solver produced one, its status otherwise
std::string cost_cell(const std::optional<double>& cost, const std::string& status) {
    if (!cost) return status;
    return format_money(static_cast<Cents>(std::llround(*cost * 100.0)));
}

BenchRow run_row(const SuiteConfig& config, const GeneratorConfig& generator) {
    BenchRow row;
    row.label = row_label(config.kind, generator);
    try {
        const Instance instance = generate_instance(generator);
        if (config.kind == ModelKind::Blp) {
            const BlpModel model = build_blp(instance);
            row.variables = model.variable_count;
            row.constraints = model.constraint_count;

            auto t0 = Clock::now();
            const SolveReport exact = solve_blp_exact(instance, model, config.exact);
            row.exact_time = seconds_between(t0, Clock::now());
            row.exact_status = to_string(exact.status);
            if (exact.status == SolveStatus::Optimal || exact.status == SolveStatus::Feasible)
                row.exact_cost = exact.objective;

            t0 = Clock::now();
            const SolveReport heur = solve_blp_anneal(instance, model, config.anneal);
            row.anneal_time = seconds_between(t0, Clock::now());
            row.anneal_status = to_string(heur.status);
            if (heur.status == SolveStatus::Optimal || heur.status == SolveStatus::Feasible)
                row.anneal_cost = heur.objective;
        } else {
            const IlpModel model = build_ilp(instance);
            row.variables = model.variable_count;
            row.constraints = model.constraint_count;

            auto t0 = Clock::now();
            const SolveReport exact = solve_ilp_exact(instance, model, config.exact);
            row.exact_time = seconds_between(t0, Clock::now());
            row.exact_status = to_string(exact.status);
            if (exact.status == SolveStatus::Optimal || exact.status == SolveStatus::Feasible)
                row.exact_cost = exact.objective;

            t0 = Clock::now();
            const SolveReport heur = solve_ilp_anneal(instance, model, config.anneal);
            row.anneal_time = seconds_between(t0, Clock::now());
            row.anneal_status = to_string(heur.status);
            if (heur.status == SolveStatus::Optimal || heur.status == SolveStatus::Feasible)
                row.anneal_cost = heur.objective;
        }
        row.gap = compute_gap(row.exact_cost, row.anneal_cost);
    } catch (const std::exception& e) {
        row.error = e.what();
        row.exact_status = "Error";
        row.anneal_status = "Error";
        row.exact_cost.reset();
        row.anneal_cost.reset();
        row.gap.reset();
    }
    return row;
}

ordered_json generator_json(const GeneratorConfig& config) {
    ordered_json fleets = ordered_json::array();
    const auto spec =
        config.fleet_spec.empty() ? default_fleet_spec(config.flights_per_day) : config.fleet_spec;
    for (const FleetSpec& f : spec)
        fleets.push_back({{"name", f.name}, {"capacity", f.capacity}, {"available", f.available}});
    return ordered_json{{"seed", config.seed},
                        {"flights_per_day", config.flights_per_day},
                        {"days", config.days},
                        {"fleets", fleets},
                        {"demand_range", {config.demand_range.first, config.demand_range.second}},
                        {"cost_range_cents", {config.cost_range.first, config.cost_range.second}}};
}

}  // namespace

std::vector<GeneratorConfig> default_ladder(ModelKind kind, std::uint64_t seed, bool large) {
    std::vector<int> sizes{46, 92, 184, 276, 368};
    if (large) sizes.insert(sizes.end(), {1104, 1840, 3680});
    std::vector<GeneratorConfig> ladder;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        GeneratorConfig config;
        config.flights_per_day = sizes[s];
        config.days = kind == ModelKind::Blp ? 7 : 1;
        config.seed = seed + s;
        ladder.push_back(config);
    }
    return ladder;
}

std::optional<double> compute_gap(std::optional<double> exact_cost,
                                  std::optional<double> anneal_cost) {
    if (!exact_cost || !anneal_cost) return {};
    if (*exact_cost == 0.0) return *anneal_cost == 0.0 ? std::optional<double>(0.0) : std::nullopt;
    return (*anneal_cost - *exact_cost) / *exact_cost;
}

std::vector<BenchRow> run_suite(const SuiteConfig& config) {
    std::vector<BenchRow> rows(config.instances.size());
    const int workers = std::max(1, config.workers);
    if (workers <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = run_row(config, config.instances[i]);
        return rows;
    }
    for (std::size_t base = 0; base < rows.size(); base += static_cast<std::size_t>(workers)) {
        const std::size_t limit =
            std::min(rows.size(), base + static_cast<std::size_t>(workers));
        std::vector<std::future<BenchRow>> batch;
        for (std::size_t i = base; i < limit; ++i)
            batch.push_back(std::async(std::launch::async,
                                       [&config, i] { return run_row(config, config.instances[i]); }));
        for (std::size_t i = base; i < limit; ++i) rows[i] = batch[i - base].get();
    }
    return rows;
}

ReportPaths write_report(const std::vector<BenchRow>& rows, const SuiteConfig& config,
                         const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    ReportPaths paths;
    paths.csv = dir / "bench.csv";
    paths.json = dir / "bench.json";

    {
        std::ofstream csv(paths.csv);
        if (!csv) throw IoError("cannot write " + paths.csv.string());
        csv << "label,variables,constraints,exact_cost,anneal_cost,exact_time_s,anneal_time_s,gap\n";
        for (const BenchRow& row : rows) {
            csv << '"' << row.label << '"' << ',' << row.variables << ',' << row.constraints << ','
                << cost_cell(row.exact_cost, row.exact_status) << ','
                << cost_cell(row.anneal_cost, row.anneal_status) << ','
                << fixed(row.exact_time, 1) << ',' << fixed(row.anneal_time, 1) << ',';
            if (row.gap) csv << fixed(*row.gap, 6);
            csv << '\n';
        }
    }

    {
        ordered_json report;
        report["kind"] = config.kind == ModelKind::Blp ? "blp" : "ilp";
        report["timing"] = "wall times cover the solve calls only; instance generation and "
                           "model build are excluded";
        report["anneal"] = ordered_json{{"sweeps", config.anneal.sweeps},
                                        {"restarts", config.anneal.restarts},
                                        {"beta_start", config.anneal.beta_start},
                                        {"beta_end", config.anneal.beta_end},
                                        {"beta_steps", config.anneal.beta_steps},
                                        {"seed", config.anneal.seed},
                                        {"repair", config.anneal.repair},
                                        {"workers", config.anneal.workers}};
        if (std::isfinite(config.anneal.time_limit))
            report["anneal"]["time_limit_s"] = config.anneal.time_limit;
        else
            report["anneal"]["time_limit_s"] = nullptr;
        if (std::isfinite(config.exact.time_limit))
            report["exact"] = ordered_json{{"time_limit_s", config.exact.time_limit}};
        else
            report["exact"] = ordered_json{{"time_limit_s", nullptr}};
        ordered_json instances = ordered_json::array();
        for (std::size_t i = 0; i < config.instances.size(); ++i) {
            ordered_json entry = generator_json(config.instances[i]);
            if (i < rows.size() && !rows[i].error.empty()) entry["error"] = rows[i].error;
            instances.push_back(std::move(entry));
        }
        report["instances"] = std::move(instances);
        std::ofstream json_out(paths.json);
        if (!json_out) throw IoError("cannot write " + paths.json.string());
        json_out << report.dump(2) << '\n';
    }

    // gnuplot-style two-column series, x = total flights in the instance
    struct Series {
        const char* file;
        std::optional<double> BenchRow::* cost;   // set for cost series
        double BenchRow::* time;                  // set for time series
    };
    const std::array<Series, 4> series{{{"cost_exact.dat", &BenchRow::exact_cost, nullptr},
                                        {"cost_anneal.dat", &BenchRow::anneal_cost, nullptr},
                                        {"time_exact.dat", nullptr, &BenchRow::exact_time},
                                        {"time_anneal.dat", nullptr, &BenchRow::anneal_time}}};
    for (const Series& s : series) {
        const std::filesystem::path path = dir / s.file;
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path.string());
        for (std::size_t i = 0; i < rows.size() && i < config.instances.size(); ++i) {
            const long long flights = static_cast<long long>(config.instances[i].flights_per_day) *
                                      std::max(1, config.instances[i].days);
            if (s.cost) {
                if (rows[i].*(s.cost)) out << flights << ' ' << fixed(*(rows[i].*(s.cost)), 2) << '\n';
            } else {
                out << flights << ' ' << fixed(rows[i].*(s.time), 3) << '\n';
            }
        }
        paths.plot_data.push_back(path);
    }
    return paths;
}

void export_timeline_dot(const Instance& instance, const Assignment& assignment,
                         const std::filesystem::path& path, std::optional<int> day) {
    // one color class per fleet type; repeats past ten fleets
    static constexpr std::array<const char*, 10> palette{
        "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
        "#e6ab02", "#a6761d", "#666666", "#386cb0", "#f0027f"};

    std::set<std::string> airports;
    for (const Flight& flight : instance.flights) {
        if (day && flight.day != *day) continue;
        airports.insert(flight.origin);
        airports.insert(flight.destination);
    }

    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "digraph schedule {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (const std::string& code : airports) out << "  \"" << code << "\";\n";
    for (const Flight& flight : instance.flights) {
        if (day && flight.day != *day) continue;
        auto it = assignment.fleet_of.find(flight.id);
        if (it == assignment.fleet_of.end())
            throw std::invalid_argument("assignment misses flight " + std::to_string(flight.id));
        const auto color = static_cast<std::size_t>(it->second) % palette.size();
        out << "  \"" << flight.origin << "\" -> \"" << flight.destination << "\" [label=\""
            << flight.id << '@' << format_schedule_time(flight.departure) << "->"
            << format_schedule_time(flight.arrival) << "\", color=\"" << palette[color]
            << "\"];\n";
    }
    out << "}\n";
}

}  // namespace fleetopt
