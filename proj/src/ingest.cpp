#include "fleetopt/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace fleetopt {

namespace {

// Multiply-shift uniform draw in [0, n); avoids the implementation-defined
// std::uniform_int_distribution so identical seeds replay everywhere.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

long long draw_range(std::mt19937_64& rng, long long lo, long long hi) {
    return lo + static_cast<long long>(draw(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

std::string chomp(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    return line;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw ModelError(path.string() + ": missing header row");
    if (chomp(line) != expected_header)
        throw ModelError(path.string() + ": expected header '" + expected_header +
                         "', got '" + chomp(line) + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        line = chomp(line);
        if (line.empty()) continue;
        rows.push_back(split_csv(line));
    }
    return rows;
}

long long parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ModelError("bad " + what + ": '" + text + "'");
    }
}

}  // namespace

int parse_schedule_time(const std::string& text) {
    std::vector<std::string> parts;
    std::string cell;
    std::stringstream ss(text);
    while (std::getline(ss, cell, ':')) parts.push_back(cell);
    if (parts.size() != 3)
        throw ModelError("bad time '" + text + "': want H:MM:SS");
    long long hour = parse_int(parts[0], "hour");
    long long minute = parse_int(parts[1], "minute");
    long long second = parse_int(parts[2], "second");
    if (second != 0)
        throw ModelError("bad time '" + text + "': sub-minute schedule times unsupported");
    if (minute < 0 || minute > 59)
        throw ModelError("bad time '" + text + "': minute out of range");
    // "1:00:00" has no 24-hour marker (the leading zero) and sits in the
    // afternoon of the published schedules; "01:00:00" is literal 1 AM.
    if (parts[0].size() == 1 && hour < 6) hour += 12;
    if (hour < 0 || hour > 23)
        throw ModelError("bad time '" + text + "': hour out of range");
    return static_cast<int>(hour * 60 + minute);
}

std::string format_schedule_time(int minutes) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%02d:%02d:00", minutes / 60, minutes % 60);
    return buf;
}

Cents parse_money(const std::string& text) {
    if (text.empty()) throw ModelError("bad amount: empty");
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    long long units = 0, frac = 0;
    std::size_t digits = 0;
    for (; pos < text.size() && text[pos] != '.'; ++pos) {
        if (text[pos] < '0' || text[pos] > '9')
            throw ModelError("bad amount: '" + text + "'");
        units = units * 10 + (text[pos] - '0');
        ++digits;
    }
    if (digits == 0) throw ModelError("bad amount: '" + text + "'");
    std::size_t frac_digits = 0;
    if (pos < text.size()) {  // consume '.'
        for (++pos; pos < text.size(); ++pos) {
            if (text[pos] < '0' || text[pos] > '9')
                throw ModelError("bad amount: '" + text + "'");
            frac = frac * 10 + (text[pos] - '0');
            ++frac_digits;
        }
        if (frac_digits == 0 || frac_digits > 2)
            throw ModelError("bad amount '" + text + "': want at most 2 decimal digits");
    }
    if (frac_digits == 1) frac *= 10;
    Cents value = units * 100 + frac;
    return negative ? -value : value;
}

std::string format_money(Cents value) {
    const bool negative = value < 0;
    const Cents mag = negative ? -value : value;
    std::ostringstream out;
    if (negative) out << '-';
    out << mag / 100 << '.' << char('0' + (mag / 10) % 10) << char('0' + mag % 10);
    return out.str();
}

std::vector<FleetSpec> default_fleet_spec(int flights_per_day) {
    // Table-stakes mixed fleet; availability grows with the day's flying
    // program so the ladder sizes stay seatable.
    static const FleetSpec base[] = {
        {"A330", 159, 10}, {"A220", 192, 15}, {"B737", 142, 15}, {"B717", 165, 8}};
    std::vector<FleetSpec> out;
    for (const FleetSpec& b : base) {
        int avail = static_cast<int>(
            (static_cast<long long>(flights_per_day) * b.available + 45) / 46);
        out.push_back({b.name, b.capacity, std::max(avail, 1)});
    }
    return out;
}

const std::vector<std::string>& default_airports() {
    static const std::vector<std::string> codes = {
        "SYD", "MEL", "HBA", "OOL", "DRW", "ADA", "BNE", "CBR", "PER"};
    return codes;
}

Instance generate_instance(const GeneratorConfig& config) {
    if (config.flights_per_day < 1) throw ModelError("flights_per_day must be >= 1");
    if (config.days < 1) throw ModelError("days must be >= 1");
    if (config.demand_range.first < 0 || config.demand_range.second > 400 ||
        config.demand_range.first > config.demand_range.second)
        throw ModelError("demand_range must be inside [0, 400]");
    if (config.cost_range.first < 0 || config.cost_range.first > config.cost_range.second)
        throw ModelError("cost_range must be a non-negative interval");

    const std::vector<FleetSpec>& fleet_spec =
        config.fleet_spec.empty() ? default_fleet_spec(config.flights_per_day)
                                  : config.fleet_spec;
    const std::vector<std::string>& airports =
        config.airports.empty() ? default_airports() : config.airports;
    if (airports.size() < 2) throw ModelError("need at least 2 airports");
    if (fleet_spec.empty()) throw ModelError("need at least 1 fleet type");

    Instance instance;
    for (std::size_t j = 0; j < fleet_spec.size(); ++j)
        instance.fleets.push_back({static_cast<int>(j), fleet_spec[j].name,
                                   fleet_spec[j].capacity, fleet_spec[j].available});

    std::mt19937_64 rng(config.seed);
    const long long total = static_cast<long long>(config.flights_per_day) * config.days;
    instance.costs = CostMatrix(static_cast<std::size_t>(total), fleet_spec.size());

    long long next_id = 11111;
    std::size_t row = 0;
    for (int day = 1; day <= config.days; ++day) {
        instance.days.push_back(day);
        for (int k = 0; k < config.flights_per_day; ++k, ++row) {
            Flight fl;
            fl.id = next_id++;
            fl.day = day;
            // origin/destination: uniform ordered pair of distinct airports
            std::size_t o = draw(rng, airports.size());
            std::size_t d = draw(rng, airports.size() - 1);
            if (d >= o) ++d;
            fl.origin = airports[o];
            fl.destination = airports[d];
            // departures on a 5-minute grid between 06:00 and 22:00
            fl.departure = 360 + 5 * static_cast<int>(draw(rng, 193));
            const int block = static_cast<int>(draw_range(rng, 60, 230));
            fl.arrival = (fl.departure + block) % 1440;
            fl.demand = static_cast<int>(
                draw_range(rng, config.demand_range.first, config.demand_range.second));
            instance.flights.push_back(fl);
            for (std::size_t j = 0; j < fleet_spec.size(); ++j)
                instance.costs.set(row, j,
                                   draw_range(rng, config.cost_range.first,
                                              config.cost_range.second));
        }
    }
    instance.lambda = 1.0;
    instance.meta = GeneratorMeta{config.seed, config.flights_per_day, config.days};
    validate(instance);
    return instance;
}

Instance load_instance(const std::filesystem::path& fleet_csv,
                       const std::filesystem::path& schedule_csv,
                       const std::filesystem::path& cost_csv,
                       double lambda) {
    Instance instance;
    instance.lambda = lambda;

    std::unordered_map<std::string, int> fleet_by_name;
    for (const auto& row : read_csv(fleet_csv, "fleet,capacity,available")) {
        if (row.size() != 3)
            throw ModelError(fleet_csv.string() + ": fleet rows need 3 cells");
        if (fleet_by_name.count(row[0]))
            throw ModelError("duplicate fleet '" + row[0] + "'");
        const int id = static_cast<int>(instance.fleets.size());
        fleet_by_name[row[0]] = id;
        instance.fleets.push_back({id, row[0],
                                   static_cast<int>(parse_int(row[1], "capacity")),
                                   static_cast<int>(parse_int(row[2], "availability"))});
    }

    std::unordered_map<long long, std::size_t> row_of_flight;
    std::set<int> day_set;
    for (const auto& row :
         read_csv(schedule_csv, "flight,origin,departure,destination,arrival,passengers,day")) {
        if (row.size() != 7)
            throw ModelError(schedule_csv.string() + ": schedule rows need 7 cells");
        Flight fl;
        fl.id = parse_int(row[0], "flight id");
        fl.origin = row[1];
        fl.departure = parse_schedule_time(row[2]);
        fl.destination = row[3];
        fl.arrival = parse_schedule_time(row[4]);
        fl.demand = static_cast<int>(parse_int(row[5], "passenger count"));
        fl.day = static_cast<int>(parse_int(row[6], "day"));
        if (row_of_flight.count(fl.id))
            throw ModelError("duplicate flight id " + std::to_string(fl.id) + " on day " +
                             std::to_string(fl.day));
        row_of_flight[fl.id] = instance.flights.size();
        day_set.insert(fl.day);
        instance.flights.push_back(fl);
    }
    instance.days.assign(day_set.begin(), day_set.end());

    instance.costs = CostMatrix(instance.flights.size(), instance.fleets.size());
    for (const auto& row : read_csv(cost_csv, "flight,from,to,fleet,total_cost")) {
        if (row.size() != 5)
            throw ModelError(cost_csv.string() + ": cost rows need 5 cells");
        const long long id = parse_int(row[0], "flight id");
        auto fit = row_of_flight.find(id);
        if (fit == row_of_flight.end())
            throw ModelError("cost row for unknown flight " + std::to_string(id));
        const Flight& fl = instance.flights[fit->second];
        if (fl.origin != row[1] || fl.destination != row[2])
            throw ModelError("cost row for flight " + std::to_string(id) +
                             " disagrees on route " + row[1] + "->" + row[2]);
        auto jit = fleet_by_name.find(row[3]);
        if (jit == fleet_by_name.end())
            throw ModelError("cost row for flight " + std::to_string(id) +
                             " names unknown fleet '" + row[3] + "'");
        const Cents cost = parse_money(row[4]);
        if (cost < 0)
            throw ModelError("negative cost for flight " + std::to_string(id));
        if (instance.costs.has(fit->second, static_cast<std::size_t>(jit->second)))
            throw ModelError("duplicate cost row for flight " + std::to_string(id) +
                             ", fleet " + row[3]);
        instance.costs.set(fit->second, static_cast<std::size_t>(jit->second), cost);
    }
    for (std::size_t i = 0; i < instance.flights.size(); ++i)
        for (std::size_t j = 0; j < instance.fleets.size(); ++j)
            if (!instance.costs.has(i, j))
                throw ModelError("no cost for flight " +
                                 std::to_string(instance.flights[i].id) + ", fleet " +
                                 instance.fleets[j].name);
    validate(instance);
    return instance;
}

SavedPaths save_instance(const Instance& instance, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    SavedPaths paths{dir / "fleet.csv", dir / "schedule.csv", dir / "cost.csv",
                     dir / "manifest.json"};

    auto open = [](const std::filesystem::path& p) {
        std::ofstream out(p);
        if (!out) throw IoError("cannot write " + p.string());
        return out;
    };

    {
        std::ofstream out = open(paths.fleet);
        out << "fleet,capacity,available\n";
        for (const FleetType& f : instance.fleets)
            out << f.name << ',' << f.capacity << ',' << f.available << '\n';
    }
    {
        std::ofstream out = open(paths.schedule);
        out << "flight,origin,departure,destination,arrival,passengers,day\n";
        for (const Flight& fl : instance.flights)
            out << fl.id << ',' << fl.origin << ',' << format_schedule_time(fl.departure)
                << ',' << fl.destination << ',' << format_schedule_time(fl.arrival) << ','
                << fl.demand << ',' << fl.day << '\n';
    }
    {
        std::ofstream out = open(paths.cost);
        out << "flight,from,to,fleet,total_cost\n";
        for (std::size_t i = 0; i < instance.flights.size(); ++i) {
            const Flight& fl = instance.flights[i];
            for (std::size_t j = 0; j < instance.fleets.size(); ++j)
                out << fl.id << ',' << fl.origin << ',' << fl.destination << ','
                    << instance.fleets[j].name << ',' << format_money(instance.costs.at(i, j))
                    << '\n';
        }
    }
    {
        nlohmann::json manifest;
        manifest["lambda"] = instance.lambda;
        manifest["fleet_count"] = instance.fleets.size();
        if (instance.meta) {
            manifest["seed"] = instance.meta->seed;
            manifest["flights_per_day"] = instance.meta->flights_per_day;
            manifest["days"] = instance.meta->days;
        } else {
            manifest["seed"] = nullptr;
            manifest["flights_per_day"] = nullptr;
            manifest["days"] = instance.days.size();
        }
        std::ofstream out = open(paths.manifest);
        out << manifest.dump(2) << '\n';
    }
    return paths;
}

Instance load_instance_dir(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("cannot open " + (dir / "manifest.json").string());
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const std::exception& e) {
        throw ModelError("bad manifest: " + std::string(e.what()));
    }
    const double lambda = manifest.value("lambda", 1.0);
    Instance instance =
        load_instance(dir / "fleet.csv", dir / "schedule.csv", dir / "cost.csv", lambda);
    if (manifest.contains("seed") && !manifest["seed"].is_null()) {
        GeneratorMeta meta;
        meta.seed = manifest["seed"].get<std::uint64_t>();
        meta.flights_per_day = manifest.value("flights_per_day", 0);
        meta.days = manifest.value("days", 0);
        instance.meta = meta;
    }
    return instance;
}

}  // namespace fleetopt
