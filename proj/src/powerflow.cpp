#include "mgd/powerflow.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "mgd/errors.hpp"
#include "mgd/format.hpp"

namespace mgd {

namespace {

double reactive_share(double power_factor)
{
    return std::tan(std::acos(power_factor));
}

} // namespace

std::vector<Complex> bus_injections(const MicrogridCase& mg, const DispatchSchedule& schedule, std::size_t hour)
{
    const double base = mg.base.power;
    std::vector<Complex> s(mg.buses.size(), Complex{0.0, 0.0});
    const auto t = static_cast<Eigen::Index>(hour);

    double shift = 0.0;
    double participating = 0.0;
    std::size_t participants = 0;
    if (schedule.has_dr() && mg.demand_response) {
        shift = schedule.dr_shift[t];
        for (const auto& lp : mg.load_points)
            if (mg.demand_response->participates(lp.category)) {
                participating += lp.profile[hour];
                ++participants;
            }
    }

    for (std::size_t i = 0; i < mg.load_points.size(); ++i) {
        const LoadPoint& lp = mg.load_points[i];
        double p = lp.profile[hour];
        if (shift != 0.0 && participants > 0 && mg.demand_response->participates(lp.category))
            p += participating > 0.0 ? shift * lp.profile[hour] / participating
                                     : shift / static_cast<double>(participants);
        s[mg.load_bus[i]] -= Complex{p, p * reactive_share(lp.power_factor)} / base;
    }
    for (std::size_t u = 0; u < mg.units.size(); ++u)
        s[mg.unit_bus[u]] += Complex{schedule.dg_setpoints(static_cast<Eigen::Index>(u), t) / base, 0.0};
    if (mg.battery)
        s[mg.battery_bus] -= Complex{schedule.battery_power[t] / base, 0.0};
    return s;
}

HourSolution solve_hour(const MicrogridCase& mg, std::span<const Complex> injections, const SweepOptions& options)
{
    const RadialNetwork& net = mg.network;
    const std::size_t n_bus = mg.buses.size();
    const std::size_t n_branch = mg.branches.size();
    if (injections.size() != n_bus)
        throw ValidationError("injection vector has " + std::to_string(injections.size()) + " entries for " +
                              std::to_string(n_bus) + " buses");
    for (const Complex& s : injections)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw ValidationError("non-finite bus injection");

    const double z_base = mg.base.impedance();
    std::vector<Complex> z(n_branch);
    for (std::size_t b = 0; b < n_branch; ++b)
        z[b] = Complex{mg.branches[b].resistance, mg.branches[b].reactance} / z_base;

    HourSolution sol;
    sol.voltages.assign(n_bus, options.slack_voltage);
    sol.branch_currents.assign(n_branch, Complex{0.0, 0.0});
    std::vector<Complex> downstream(n_bus);

    bool converged = false;
    for (int it = 1; it <= options.max_iterations; ++it) {
        // Backward sweep: accumulate load currents from the leaves towards the slack.
        for (std::size_t i = 0; i < n_bus; ++i)
            downstream[i] = -std::conj(injections[i] / sol.voltages[i]);
        for (std::size_t b : net.order) {
            sol.branch_currents[b] = downstream[net.downstream_bus[b]];
            downstream[net.upstream_bus[b]] += sol.branch_currents[b];
        }
        // Forward sweep: voltage drops from the slack outwards.
        double change = 0.0;
        for (auto it_b = net.order.rbegin(); it_b != net.order.rend(); ++it_b) {
            const std::size_t b = *it_b;
            const std::size_t child = net.downstream_bus[b];
            const Complex updated = sol.voltages[net.upstream_bus[b]] - z[b] * sol.branch_currents[b];
            change = std::max(change, std::abs(updated - sol.voltages[child]));
            sol.voltages[child] = updated;
        }
        sol.iterations = it;
        sol.mismatch = change;
        for (std::size_t i = 0; i < n_bus; ++i) {
            const double magnitude = std::abs(sol.voltages[i]);
            if (!std::isfinite(magnitude) || magnitude < options.collapse_floor)
                throw VoltageCollapseError("voltage collapse at bus '" + mg.buses[i].id + "' (|V| = " +
                                           fmt_num(magnitude) + " pu) after " + std::to_string(it) +
                                           " sweeps");
        }
        if (change < options.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("backward-forward sweep did not converge in " +
                               std::to_string(options.max_iterations) + " iterations (last change " +
                               fmt_num(sol.mismatch) + " pu)");

    // Final currents consistent with the converged voltages.
    for (std::size_t i = 0; i < n_bus; ++i)
        downstream[i] = -std::conj(injections[i] / sol.voltages[i]);
    for (std::size_t b : net.order) {
        sol.branch_currents[b] = downstream[net.downstream_bus[b]];
        downstream[net.upstream_bus[b]] += sol.branch_currents[b];
    }
    sol.slack_power = sol.voltages[net.slack] * std::conj(downstream[net.slack]);

    double loss_pu = 0.0;
    for (std::size_t b = 0; b < n_branch; ++b)
        loss_pu += std::norm(sol.branch_currents[b]) * z[b].real();
    double net_injection = 0.0;
    for (std::size_t i = 0; i < n_bus; ++i)
        net_injection += injections[i].real();
    sol.loss_kw = loss_pu * mg.base.power;
    sol.balance_loss_kw = (sol.slack_power.real() + net_injection) * mg.base.power;
    sol.slack_kw = sol.slack_power.real() * mg.base.power;
    return sol;
}

PowerFlowSolution solve_horizon(const MicrogridCase& mg, const DispatchSchedule& schedule, const SweepOptions& options)
{
    const std::size_t horizon = mg.horizon;
    if (schedule.horizon() != horizon || static_cast<std::size_t>(schedule.dg_setpoints.rows()) != mg.units.size() ||
        static_cast<std::size_t>(schedule.dg_setpoints.cols()) != horizon ||
        (schedule.has_dr() && static_cast<std::size_t>(schedule.dr_shift.size()) != horizon))
        throw ValidationError("schedule dimensions do not match the case");

    PowerFlowSolution result;
    result.hours.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        const auto injections = bus_injections(mg, schedule, t);
        try {
            result.hours.push_back(solve_hour(mg, injections, options));
        } catch (const VoltageCollapseError& e) {
            throw VoltageCollapseError("period " + std::to_string(t) + ": " + e.what());
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("period " + std::to_string(t) + ": " + e.what());
        }
    }
    const auto slack = result.slack_series();
    result.grid_violations = grid_feasibility(mg.grid_limit, slack, mg.allow_export ? mg.export_limit : 0.0);
    return result;
}

double PowerFlowSolution::total_loss_kw() const
{
    double total = 0.0;
    for (const auto& h : hours)
        total += h.loss_kw;
    return total;
}

std::vector<double> PowerFlowSolution::slack_series() const
{
    std::vector<double> out;
    out.reserve(hours.size());
    for (const auto& h : hours)
        out.push_back(h.slack_kw);
    return out;
}

std::vector<double> PowerFlowSolution::loss_series() const
{
    std::vector<double> out;
    out.reserve(hours.size());
    for (const auto& h : hours)
        out.push_back(h.loss_kw);
    return out;
}

void write_hourly_csv(std::ostream& out, const PowerFlowSolution& solution)
{
    out << "hour,grid_kw,loss_kw,v_min_pu,v_max_pu,iterations\n";
    for (std::size_t t = 0; t < solution.hours.size(); ++t) {
        const auto& h = solution.hours[t];
        double v_min = 1e300, v_max = -1e300;
        for (const auto& v : h.voltages) {
            v_min = std::min(v_min, std::abs(v));
            v_max = std::max(v_max, std::abs(v));
        }
        out << t + 1 << ',' << fmt_num(h.slack_kw) << ',' << fmt_num(h.loss_kw) << ',' << fmt_num(v_min) << ','
            << fmt_num(v_max) << ',' << h.iterations << '\n';
    }
}

void write_voltage_csv(std::ostream& out, const MicrogridCase& mg, const PowerFlowSolution& solution)
{
    out << "hour";
    for (const auto& b : mg.buses)
        out << ',' << b.id;
    out << '\n';
    for (std::size_t t = 0; t < solution.hours.size(); ++t) {
        out << t + 1;
        for (const auto& v : solution.hours[t].voltages)
            out << ',' << fmt_num(std::abs(v));
        out << '\n';
    }
}

void write_current_csv(std::ostream& out, const MicrogridCase& mg, const PowerFlowSolution& solution)
{
    out << "hour";
    for (const auto& b : mg.branches)
        out << ',' << b.id;
    out << '\n';
    for (std::size_t t = 0; t < solution.hours.size(); ++t) {
        out << t + 1;
        for (const auto& i : solution.hours[t].branch_currents)
            out << ',' << fmt_num(std::abs(i));
        out << '\n';
    }
}

} // namespace mgd
