#include "fleetopt/model_blp.hpp"

#include "fleetopt/domain.hpp"

namespace fleetopt {

BlpModel build_blp(const Instance& instance) {
    validate(instance);
    BlpModel model;
    model.fleet_count = instance.fleets.size();
    const std::size_t eta = instance.fleets.size();

    for (int day : instance.days) {
        DayProblem dp;
        dp.day = day;
        for (std::size_t i = 0; i < instance.flights.size(); ++i) {
            if (instance.flights[i].day != day) continue;
            dp.flight_ids.push_back(instance.flights[i].id);
            dp.flight_rows.push_back(i);
            for (std::size_t j = 0; j < eta; ++j)
                dp.effective_cost.push_back(
                    effective_cost_cents(instance, i, static_cast<int>(j)));
        }
        long long seats = 0;
        for (const FleetType& f : instance.fleets) {
            dp.fleet_caps.push_back(f.available);
            seats += f.available;
        }
        dp.capacity_infeasible = seats < static_cast<long long>(dp.flight_count());
        model.variable_count += static_cast<long long>(dp.flight_count()) * eta;
        model.constraint_count += static_cast<long long>(dp.flight_count());
        model.day_problems.push_back(std::move(dp));
    }
    model.constraint_count += static_cast<long long>(eta) * instance.days.size();
    return model;
}

const std::vector<DayProblem>& decompose_by_day(const BlpModel& model) {
    return model.day_problems;
}

}  // namespace fleetopt
