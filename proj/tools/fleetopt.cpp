#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fleetopt/anneal.hpp"
#include "fleetopt/bench.hpp"
#include "fleetopt/domain.hpp"
#include "fleetopt/exact.hpp"
#include "fleetopt/ingest.hpp"
#include "fleetopt/model_blp.hpp"
#include "fleetopt/model_ilp.hpp"

namespace {

using namespace fleetopt;

// FLEETOPT_SEED fills in for any seed flag the user left unset
std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("FLEETOPT_SEED");
    if (!raw || !*raw) return {};
    if (raw[0] == '-') throw std::invalid_argument("FLEETOPT_SEED must be non-negative");
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (errno != 0 || end == raw || *end != '\0')
        throw std::invalid_argument("FLEETOPT_SEED is not an unsigned integer: '" +
                                    std::string(raw) + "'");
    return value;
}

std::string money(double currency) {
    return format_money(static_cast<Cents>(std::llround(currency * 100.0)));
}

std::string fixed(double value, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

void print_report_line(const SolveReport& report) {
    std::cout << "status=" << to_string(report.status);
    if (report.status == SolveStatus::Optimal || report.status == SolveStatus::Feasible)
        std::cout << " objective=" << money(report.objective);
    if (report.bound) std::cout << " bound=" << money(*report.bound);
    std::cout << " wall_time_s=" << fixed(report.wall_time, 3) << '\n';
}

void write_assignment_csv(const Instance& instance, const Assignment& assignment,
                          std::ostream& out) {
    out << "flight,origin,departure,destination,arrival,passengers,day,fleet_assigned\n";
    for (const Flight& flight : instance.flights) {
        auto it = assignment.fleet_of.find(flight.id);
        if (it == assignment.fleet_of.end())
            throw ModelError("solver returned no fleet for flight " + std::to_string(flight.id));
        out << flight.id << ',' << flight.origin << ',' << format_schedule_time(flight.departure)
            << ',' << flight.destination << ',' << format_schedule_time(flight.arrival) << ','
            << flight.demand << ',' << flight.day << ','
            << instance.fleets[static_cast<std::size_t>(it->second)].name << '\n';
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

// reads a CSV produced by `solve` (or anything with flight + fleet_assigned)
Assignment read_assignment_csv(const Instance& instance, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ModelError("assignment file is empty: " + path.string());
    const auto header = split_csv_line(line);
    std::size_t flight_col = header.size(), fleet_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "flight") flight_col = i;
        if (header[i] == "fleet_assigned") fleet_col = i;
    }
    if (flight_col == header.size() || fleet_col == header.size())
        throw ModelError("assignment file needs 'flight' and 'fleet_assigned' columns");

    std::map<std::string, int> fleet_by_name;
    for (const FleetType& f : instance.fleets) fleet_by_name[f.name] = f.id;

    Assignment assignment;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() <= std::max(flight_col, fleet_col))
            throw ModelError("short assignment row: " + line);
        const long long id = std::stoll(cells[flight_col]);
        auto it = fleet_by_name.find(cells[fleet_col]);
        if (it == fleet_by_name.end())
            throw ModelError("assignment names unknown fleet '" + cells[fleet_col] + "'");
        assignment.fleet_of[id] = it->second;
    }
    return assignment;
}

struct SolveFlags {
    std::string dir;
    std::string model = "blp";
    std::string backend = "exact";
    std::string out;
    std::string grounded_out;
    double lambda = -1.0;  // negative = keep the instance's value
    long long sweeps = 0;
    int restarts = 8;
    std::uint64_t anneal_seed = 1;
    bool seed_given = false;
    bool no_repair = false;
    double time_limit = 0.0;  // 0 = unlimited
    int workers = 0;
};

void add_anneal_flags(CLI::App* cmd, SolveFlags& flags) {
    cmd->add_option("--sweeps", flags.sweeps, "Metropolis sweeps per restart (0 = default)");
    cmd->add_option("--restarts", flags.restarts, "independent annealing restarts");
    cmd->add_option("--anneal-seed", flags.anneal_seed, "annealer RNG seed")
        ->each([&flags](const std::string&) { flags.seed_given = true; });
    cmd->add_flag("--no-repair", flags.no_repair, "skip feasibility repair and local descent");
    cmd->add_option("--workers", flags.workers, "concurrent restarts (0 = hardware)");
}

AnnealConfig anneal_config_from(const SolveFlags& flags) {
    AnnealConfig config;
    config.sweeps = flags.sweeps;
    config.restarts = flags.restarts;
    config.seed = flags.anneal_seed;
    if (!flags.seed_given)
        if (auto seed = env_seed()) config.seed = *seed;
    config.repair = !flags.no_repair;
    config.workers = flags.workers;
    if (flags.time_limit > 0.0) config.time_limit = flags.time_limit;
    return config;
}

int run_solve(const SolveFlags& flags) {
    Instance instance = load_instance_dir(flags.dir);
    if (flags.lambda >= 0.0) {
        instance.lambda = flags.lambda;
        validate(instance);
    }

    SolveReport report;
    std::optional<IlpModel> ilp;  // kept for the grounded report
    if (flags.model == "blp") {
        const BlpModel model = build_blp(instance);
        if (flags.backend == "exact") {
            ExactConfig config;
            if (flags.time_limit > 0.0) config.time_limit = flags.time_limit;
            report = solve_blp_exact(instance, model, config);
        } else {
            report = solve_blp_anneal(instance, model, anneal_config_from(flags));
        }
    } else {
        ilp = build_ilp(instance);
        if (flags.backend == "exact") {
            ExactConfig config;
            if (flags.time_limit > 0.0) config.time_limit = flags.time_limit;
            report = solve_ilp_exact(instance, *ilp, config);
        } else {
            report = solve_ilp_anneal(instance, *ilp, anneal_config_from(flags));
        }
    }

    print_report_line(report);
    if (report.status != SolveStatus::Optimal && report.status != SolveStatus::Feasible) return 1;

    if (flags.out.empty()) {
        write_assignment_csv(instance, *report.assignment, std::cout);
    } else {
        std::ofstream out(flags.out);
        if (!out) throw IoError("cannot write " + flags.out);
        write_assignment_csv(instance, *report.assignment, out);
        std::cout << "assignment=" << flags.out << '\n';
    }

    if (!flags.grounded_out.empty()) {
        if (!ilp) throw std::invalid_argument("--grounded-out needs --model ilp");
        const auto initial =
            minimal_initials(ilp->network, *report.assignment, ilp->fleet_count());
        const auto propagation =
            propagate_grounded(ilp->network, *report.assignment, initial, ilp->fleet_count());
        write_grounded_report(instance, ilp->network, propagation.end_of_day, flags.grounded_out);
        std::cout << "grounded=" << flags.grounded_out << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fleet assignment toolkit: generate, solve, benchmark"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "write a seeded synthetic instance");
    GeneratorConfig gen_config;
    std::string gen_out = "instance";
    bool gen_seed_given = false;
    generate->add_option("--seed", gen_config.seed, "generator seed")
        ->each([&gen_seed_given](const std::string&) { gen_seed_given = true; });
    generate->add_option("--flights-per-day", gen_config.flights_per_day, "flights per day");
    generate->add_option("--days", gen_config.days, "number of days");
    generate->add_option("--out-dir", gen_out, "output directory");

    // solve
    auto* solve = app.add_subcommand("solve", "solve a saved instance");
    SolveFlags solve_flags;
    solve->add_option("--dir", solve_flags.dir, "saved instance directory")->required();
    solve->add_option("--model", solve_flags.model, "blp (multi-day) or ilp (single-day balance)")
        ->check(CLI::IsMember({"blp", "ilp"}));
    solve->add_option("--backend", solve_flags.backend, "exact or anneal")
        ->check(CLI::IsMember({"exact", "anneal"}));
    solve->add_option("--out", solve_flags.out, "assignment CSV path (default: stdout)");
    solve->add_option("--grounded-out", solve_flags.grounded_out,
                      "end-of-day grounded aircraft CSV (ilp only)");
    solve->add_option("--lambda", solve_flags.lambda, "override the seat-mismatch weight");
    solve->add_option("--time-limit", solve_flags.time_limit, "solver time limit in seconds");
    add_anneal_flags(solve, solve_flags);

    // bench
    auto* bench = app.add_subcommand("bench", "run the size ladder with both backends");
    SolveFlags bench_flags;
    std::string bench_model = "blp";
    std::string bench_dir = "bench-out";
    std::uint64_t bench_seed = 1;
    bool bench_seed_given = false;
    bool bench_large = false;
    double bench_exact_limit = 0.0;
    std::vector<int> bench_sizes;
    int bench_days = 0;
    bench->add_option("--model", bench_model, "blp or ilp")
        ->check(CLI::IsMember({"blp", "ilp"}));
    bench->add_option("--out-dir", bench_dir, "report directory");
    bench->add_option("--seed", bench_seed, "suite seed (one per rung derives from it)")
        ->each([&bench_seed_given](const std::string&) { bench_seed_given = true; });
    bench->add_flag("--large", bench_large, "append the 1104/1840/3680 rungs (long runtimes)");
    bench->add_option("--sizes", bench_sizes, "explicit flights-per-day list replacing the ladder");
    bench->add_option("--days", bench_days, "days per instance with --sizes");
    bench->add_option("--time-limit", bench_flags.time_limit, "anneal time limit per row, seconds");
    bench->add_option("--exact-time-limit", bench_exact_limit, "exact time limit per row, seconds");
    add_anneal_flags(bench, bench_flags);

    // export-dot
    auto* dot = app.add_subcommand("export-dot", "write the schedule as a Graphviz digraph");
    SolveFlags dot_flags;
    std::string dot_out = "timeline.dot";
    std::string dot_assignment;
    int dot_day = 0;
    dot->add_option("--dir", dot_flags.dir, "saved instance directory")->required();
    dot->add_option("--out", dot_out, "output .dot path");
    dot->add_option("--assignment", dot_assignment,
                    "assignment CSV from `solve` (default: solve exact here)");
    dot->add_option("--model", dot_flags.model, "blp or ilp (when solving here)")
        ->check(CLI::IsMember({"blp", "ilp"}));
    dot->add_option("--day", dot_day, "restrict the export to one day");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "print model dimensions");
    std::string inspect_dir;
    std::string inspect_model = "blp";
    inspect->add_option("--dir", inspect_dir, "saved instance directory")->required();
    inspect->add_option("--model", inspect_model, "blp or ilp")
        ->check(CLI::IsMember({"blp", "ilp"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) {
            if (!gen_seed_given)
                if (auto seed = env_seed()) gen_config.seed = *seed;
            const Instance instance = generate_instance(gen_config);
            save_instance(instance, gen_out);
            std::cout << "wrote " << gen_out << ": " << instance.flights.size() << " flights, "
                      << instance.fleets.size() << " fleets, " << instance.days.size()
                      << " days (seed " << gen_config.seed << ")\n";
            return 0;
        }
        if (solve->parsed()) return run_solve(solve_flags);
        if (bench->parsed()) {
            SuiteConfig suite;
            suite.kind = bench_model == "blp" ? ModelKind::Blp : ModelKind::Ilp;
            if (!bench_seed_given)
                if (auto seed = env_seed()) bench_seed = *seed;
            if (bench_sizes.empty()) {
                suite.instances = default_ladder(suite.kind, bench_seed, bench_large);
            } else {
                for (std::size_t s = 0; s < bench_sizes.size(); ++s) {
                    GeneratorConfig config;
                    config.flights_per_day = bench_sizes[s];
                    config.days = bench_days > 0 ? bench_days
                                                 : (suite.kind == ModelKind::Blp ? 7 : 1);
                    config.seed = bench_seed + s;
                    suite.instances.push_back(config);
                }
            }
            bench_flags.anneal_seed = bench_flags.seed_given ? bench_flags.anneal_seed : bench_seed;
            bench_flags.seed_given = true;  // already resolved against the env
            suite.anneal = anneal_config_from(bench_flags);
            if (bench_exact_limit > 0.0) suite.exact.time_limit = bench_exact_limit;
            // the large rungs are only sane with ceilings; supply them if absent
            if (bench_large && !(bench_flags.time_limit > 0.0)) suite.anneal.time_limit = 120.0;
            if (bench_large && !(bench_exact_limit > 0.0)) suite.exact.time_limit = 900.0;
            const auto rows = run_suite(suite);
            const auto paths = write_report(rows, suite, bench_dir);
            for (const BenchRow& row : rows) {
                std::cout << row.label << " exact=" << (row.exact_cost ? money(*row.exact_cost)
                                                                       : row.exact_status)
                          << " anneal=" << (row.anneal_cost ? money(*row.anneal_cost)
                                                            : row.anneal_status);
                if (row.gap) std::cout << " gap=" << fixed(*row.gap, 6);
                if (!row.error.empty()) std::cout << " error=" << row.error;
                std::cout << '\n';
            }
            std::cout << "wrote " << paths.csv.string() << '\n';
            return 0;
        }
        if (dot->parsed()) {
            const Instance instance = load_instance_dir(dot_flags.dir);
            Assignment assignment;
            if (!dot_assignment.empty()) {
                assignment = read_assignment_csv(instance, dot_assignment);
            } else {
                SolveReport report;
                if (dot_flags.model == "blp")
                    report = solve_blp_exact(instance, build_blp(instance), {});
                else
                    report = solve_ilp_exact(instance, build_ilp(instance), {});
                if (!report.assignment) return 1;
                assignment = *report.assignment;
            }
            std::optional<int> day;
            if (dot_day > 0) day = dot_day;
            export_timeline_dot(instance, assignment, dot_out, day);
            std::cout << "wrote " << dot_out << '\n';
            return 0;
        }
        if (inspect->parsed()) {
            const Instance instance = load_instance_dir(inspect_dir);
            if (inspect_model == "blp") {
                const BlpModel model = build_blp(instance);
                std::cout << "variables=" << model.variable_count
                          << " constraints=" << model.constraint_count << '\n';
            } else {
                const IlpModel model = build_ilp(instance);
                std::cout << "variables=" << model.variable_count
                          << " constraints=" << model.constraint_count << '\n';
                std::cout << "initial_variables=" << model.initial_variable_count
                          << " initial_constraints=" << model.initial_constraint_count << '\n';
            }
            std::cout << "search_space_log2=" << fixed(search_space_log2(instance), 1) << '\n';
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
