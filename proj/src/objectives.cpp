#include "mgd/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>

#include "mgd/errors.hpp"
#include "mgd/log.hpp"
#include "mgd/reliability.hpp"

namespace mgd {

namespace {
bool g_warnings_enabled = true;
std::mutex g_log_mutex;
} // namespace

void log_warning(const std::string& message)
{
    std::lock_guard lock(g_log_mutex);
    if (g_warnings_enabled)
        std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled)
{
    std::lock_guard lock(g_log_mutex);
    g_warnings_enabled = enabled;
}

const char* to_string(Objective objective)
{
    switch (objective) {
    case Objective::Cost: return "cost";
    case Objective::Loss: return "loss";
    case Objective::Reliability: return "unsupplied_energy";
    case Objective::Voltage: return "voltage_deviation";
    }
    return "?";
}

double eval_f1(const MicrogridCase& mg, const DispatchSchedule& schedule, const PowerFlowSolution& pf)
{
    if (pf.hours.size() != mg.horizon)
        throw ConvergenceError("operating cost needs a converged power flow for every period");
    const double dt = mg.period_length;
    double total = 0.0;
    for (std::size_t t = 0; t < mg.horizon; ++t) {
        const auto col = static_cast<Eigen::Index>(t);
        for (std::size_t u = 0; u < mg.units.size(); ++u)
            total += dg_cost(mg.units[u], schedule.dg_setpoints(static_cast<Eigen::Index>(u), col)) * dt;
        double grid = pf.hours[t].slack_kw;
        if (!mg.allow_export)
            grid = std::max(grid, 0.0);
        total += grid * mg.prices.grid_price[t] * dt;
        if (mg.battery)
            total += std::abs(schedule.battery_power[col]) * mg.battery->usage_cost * dt;
        if (schedule.has_dr() && mg.demand_response)
            total += std::max(0.0, schedule.dr_shift[col]) * mg.demand_response->shift_cost * dt;
    }
    return total;
}

double eval_f2(const PowerFlowSolution& pf)
{
    return pf.total_loss_kw();
}

double eval_f4(const MicrogridCase& mg, const PowerFlowSolution& pf, double v_ref)
{
    std::vector<bool> load_bus(mg.buses.size(), false);
    for (std::size_t bus : mg.load_bus)
        load_bus[bus] = true;
    double total = 0.0;
    for (const auto& hour : pf.hours)
        for (std::size_t i = 0; i < hour.voltages.size(); ++i)
            if (load_bus[i])
                total += std::abs(v_ref - std::abs(hour.voltages[i]));
    return total;
}

double normalize_and_scalarize(const ObjectiveVector& raw, const BoundsVector& bounds, const ObjectiveVector& weights)
{
    double value = 0.0;
    for (std::size_t k = 0; k < kObjectiveCount; ++k) {
        if (bounds[k].degenerate())
            continue;
        const double term = (raw[k] - bounds[k].min) / (bounds[k].max - bounds[k].min);
        value += weights[k] * std::clamp(term, 0.0, 1.0);
    }
    return value;
}

std::size_t warn_degenerate_bounds(const BoundsVector& bounds)
{
    std::size_t count = 0;
    for (std::size_t k = 0; k < kObjectiveCount; ++k)
        if (bounds[k].degenerate()) {
            ++count;
            log_warning(std::string("degenerate normalisation bounds for ") + to_string(static_cast<Objective>(k)) +
                        "; the term contributes 0");
        }
    return count;
}

ScheduleEvaluation evaluate_schedule(const MicrogridCase& mg, const DispatchSchedule& schedule,
                                     const SweepOptions& options)
{
    ScheduleEvaluation ev;
    ev.pf = solve_horizon(mg, schedule, options);
    ev.soc = schedule_soc(mg, schedule);
    ev.bundle.f1_cost = eval_f1(mg, schedule, ev.pf);
    ev.bundle.f2_loss = eval_f2(ev.pf);
    ev.bundle.f3_ens = unsupplied_energy_cost(mg, schedule, ev.soc);
    ev.bundle.f4_vdev = eval_f4(mg, ev.pf);
    return ev;
}

} // namespace mgd
