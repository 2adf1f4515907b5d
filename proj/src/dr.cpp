#include "mgd/dr.hpp"

#include <cmath>

#include "mgd/errors.hpp"

namespace mgd {

std::vector<double> participating_demand(const MicrogridCase& mg)
{
    std::vector<double> demand(mg.horizon, 0.0);
    if (!mg.demand_response)
        return demand;
    for (const auto& lp : mg.load_points)
        if (mg.demand_response->participates(lp.category))
            for (std::size_t t = 0; t < mg.horizon; ++t)
                demand[t] += lp.profile[t];
    return demand;
}

std::vector<LoadPoint> distribute_shift(const MicrogridCase& mg, std::span<const double> shift)
{
    std::vector<LoadPoint> loads = mg.load_points;
    if (!mg.demand_response)
        return loads;
    const DrProgram& dr = *mg.demand_response;
    const auto demand = participating_demand(mg);
    std::size_t members = 0;
    for (const auto& lp : loads)
        members += dr.participates(lp.category);
    if (members == 0)
        return loads;
    for (std::size_t t = 0; t < mg.horizon && t < shift.size(); ++t) {
        if (shift[t] == 0.0)
            continue;
        for (std::size_t l = 0; l < loads.size(); ++l) {
            if (!dr.participates(loads[l].category))
                continue;
            const double share = demand[t] > 0.0 ? mg.load_points[l].profile[t] / demand[t]
                                                 : 1.0 / static_cast<double>(members);
            loads[l].profile[t] += shift[t] * share;
        }
    }
    return loads;
}

std::vector<LoadPoint> apply_shift(const MicrogridCase& mg, std::span<const double> shift, double tolerance)
{
    if (!mg.demand_response)
        throw ValidationError("case has no demand-response program");
    if (shift.size() != mg.horizon)
        throw ValidationError("shift vector has " + std::to_string(shift.size()) + " entries, expected " +
                              std::to_string(mg.horizon));
    double total = 0.0;
    for (double s : shift)
        total += s;
    if (std::abs(total) > tolerance)
        throw ValidationError("shift is not energy neutral: sums to " + std::to_string(total) + " kW");
    const auto demand = participating_demand(mg);
    for (std::size_t t = 0; t < mg.horizon; ++t) {
        const double limit = mg.demand_response->shiftable_fraction[t] * demand[t];
        if (shift[t] < -limit - tolerance)
            throw ValidationError("shift in period " + std::to_string(t + 1) + " exceeds the shiftable share");
    }
    auto loads = distribute_shift(mg, shift);
    for (const auto& lp : loads)
        for (std::size_t t = 0; t < mg.horizon; ++t)
            if (lp.profile[t] < -tolerance)
                throw ValidationError("shifted load at bus " + lp.bus + " is negative in period " +
                                      std::to_string(t + 1));
    return loads;
}

ScenarioResult optimize_with_dr(const MicrogridCase& mg, const ScalarizationSetup& setup,
                                const ScenarioResult& without_dr, const RunOptions& options)
{
    if (!mg.demand_response)
        throw ValidationError("demand response requested but the case has no DR program");
    RunOptions opts = options;
    DispatchSchedule start = without_dr.schedule;
    start.dr_shift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mg.horizon));
    opts.warm_starts.insert(opts.warm_starts.begin(), start);
    ScenarioResult r = run_scalarized(mg, setup, opts, true);
    r.with_dr = true;
    return r;
}

} // namespace mgd
