#include "mgd/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "mgd/errors.hpp"
#include "mgd/reliability.hpp"

namespace mgd {

const char* to_string(BusKind kind)
{
    switch (kind) {
    case BusKind::Slack: return "slack";
    case BusKind::Load: return "load";
    case BusKind::Generation: return "generation";
    }
    return "?";
}

BusKind bus_kind_from_string(const std::string& text)
{
    if (text == "slack") return BusKind::Slack;
    if (text == "load") return BusKind::Load;
    if (text == "generation") return BusKind::Generation;
    throw ParseError("unknown bus kind '" + text + "'");
}

RadialNetwork validate_radial(const std::vector<Bus>& buses, const std::vector<Branch>& branches)
{
    RadialNetwork net;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (!index.emplace(buses[i].id, i).second)
            throw ValidationError("duplicate bus id '" + buses[i].id + "'");
        if (buses[i].kind == BusKind::Slack) {
            if (net.slack != kNoIndex)
                throw ValidationError("second slack bus '" + buses[i].id + "' (first is '" +
                                      buses[net.slack].id + "')");
            net.slack = i;
        }
    }
    if (net.slack == kNoIndex)
        throw ValidationError("no slack bus");

    // adjacency: bus -> (branch, neighbour)
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacent(buses.size());
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const auto& br = branches[b];
        auto from = index.find(br.from_bus);
        auto to = index.find(br.to_bus);
        if (from == index.end())
            throw ValidationError("branch '" + br.id + "' references unknown bus '" + br.from_bus + "'");
        if (to == index.end())
            throw ValidationError("branch '" + br.id + "' references unknown bus '" + br.to_bus + "'");
        if (from->second == to->second)
            throw ValidationError("branch '" + br.id + "' connects bus '" + br.from_bus + "' to itself");
        adjacent[from->second].emplace_back(b, to->second);
        adjacent[to->second].emplace_back(b, from->second);
    }

    net.upstream_bus.assign(branches.size(), kNoIndex);
    net.downstream_bus.assign(branches.size(), kNoIndex);
    net.parent_branch.assign(buses.size(), kNoIndex);

    std::vector<bool> visited(buses.size(), false);
    std::vector<bool> branch_used(branches.size(), false);
    std::vector<std::size_t> bfs_branches;
    std::queue<std::size_t> frontier;
    frontier.push(net.slack);
    visited[net.slack] = true;
    while (!frontier.empty()) {
        const std::size_t bus = frontier.front();
        frontier.pop();
        for (auto [b, other] : adjacent[bus]) {
            if (branch_used[b])
                continue;
            branch_used[b] = true;
            if (visited[other])
                throw ValidationError("cycle detected: branch '" + branches[b].id + "' closes a loop at bus '" +
                                      buses[other].id + "'");
            visited[other] = true;
            net.upstream_bus[b] = bus;
            net.downstream_bus[b] = other;
            net.parent_branch[other] = b;
            bfs_branches.push_back(b);
            frontier.push(other);
        }
    }
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (!visited[i])
            throw ValidationError("bus '" + buses[i].id + "' is not connected to the slack bus");
    for (std::size_t b = 0; b < branches.size(); ++b)
        if (!branch_used[b])
            throw ValidationError("branch '" + branches[b].id + "' is not reachable from the slack bus");

    // Reverse breadth-first order puts every subtree ahead of its feeding branch.
    net.order.assign(bfs_branches.rbegin(), bfs_branches.rend());
    return net;
}

std::size_t MicrogridCase::bus_index(const std::string& id) const
{
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id)
            return i;
    throw ValidationError("unknown bus '" + id + "'");
}

std::size_t MicrogridCase::branch_index(const std::string& id) const
{
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (branches[i].id == id)
            return i;
    throw ValidationError("unknown branch '" + id + "'");
}

std::size_t MicrogridCase::unit_index(const std::string& unit_name) const
{
    for (std::size_t i = 0; i < units.size(); ++i)
        if (units[i].name == unit_name)
            return i;
    throw ValidationError("unknown unit '" + unit_name + "'");
}

double MicrogridCase::unit_cap(std::size_t unit, std::size_t hour) const
{
    const DgUnit& u = units[unit];
    if (u.dispatchable)
        return u.p_max;
    return renewable_availability.at(u.name)[hour];
}

double MicrogridCase::total_demand(std::size_t hour) const
{
    double total = 0.0;
    for (const auto& lp : load_points)
        total += lp.profile[hour];
    return total;
}

namespace {

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw ValidationError(message);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_series(const std::vector<double>& series, std::size_t horizon, const std::string& what)
{
    require(series.size() == horizon,
            what + ": expected " + std::to_string(horizon) + " entries, got " + std::to_string(series.size()));
    for (std::size_t t = 0; t < series.size(); ++t)
        require(finite_nonneg(series[t]), what + ": entry " + std::to_string(t) + " is negative or not finite");
}

} // namespace

void validate_case(MicrogridCase& mg)
{
    require(mg.horizon > 0, "horizon must be positive");
    require(mg.period_length > 0.0 && std::isfinite(mg.period_length), "period_length must be positive");
    require(mg.base.voltage > 0.0 && mg.base.power > 0.0, "per-unit base must be positive");

    for (const auto& br : mg.branches) {
        require(std::isfinite(br.resistance) && br.resistance >= 0.0,
                "branch '" + br.id + "': resistance must be >= 0");
        require(std::isfinite(br.reactance) && br.reactance >= 0.0,
                "branch '" + br.id + "': reactance must be >= 0");
    }
    for (std::size_t i = 0; i < mg.branches.size(); ++i)
        for (std::size_t j = i + 1; j < mg.branches.size(); ++j)
            require(mg.branches[i].id != mg.branches[j].id, "duplicate branch id '" + mg.branches[i].id + "'");

    mg.network = validate_radial(mg.buses, mg.branches);

    for (std::size_t i = 0; i < mg.load_points.size(); ++i) {
        const auto& lp = mg.load_points[i];
        const std::string what = "load point " + std::to_string(i) + " at bus '" + lp.bus + "'";
        mg.bus_index(lp.bus);
        check_series(lp.profile, mg.horizon, what + " profile");
        require(lp.power_factor > 0.0 && lp.power_factor <= 1.0, what + ": power_factor must be in (0, 1]");
    }

    check_series(mg.prices.grid_price, mg.horizon, "grid price");
    require(mg.grid_limit > 0.0 && std::isfinite(mg.grid_limit), "grid import limit must be > 0");
    require(mg.export_limit >= 0.0, "grid export limit must be >= 0");
    require(mg.voltage_limits.v_min < 1.0 && 1.0 < mg.voltage_limits.v_max,
            "voltage limits must satisfy v_min < 1 < v_max");

    for (std::size_t i = 0; i < mg.units.size(); ++i) {
        const DgUnit& u = mg.units[i];
        const std::string what = "unit '" + u.name + "'";
        for (std::size_t j = i + 1; j < mg.units.size(); ++j)
            require(mg.units[j].name != u.name, "duplicate unit name '" + u.name + "'");
        mg.bus_index(u.bus);
        require(finite_nonneg(u.p_min) && u.p_min <= u.p_max && std::isfinite(u.p_max),
                what + ": requires 0 <= p_min <= p_max");
        require(finite_nonneg(u.cost_slope), what + ": cost_slope must be >= 0");
        require(finite_nonneg(u.cost_fixed), what + ": cost_fixed must be >= 0");
        auto avail = mg.renewable_availability.find(u.name);
        if (u.dispatchable) {
            require(avail == mg.renewable_availability.end(),
                    what + ": dispatchable units take no availability curve");
        } else {
            require(u.p_min == 0.0, what + ": non-dispatchable units must have p_min = 0");
            require(avail != mg.renewable_availability.end(), what + ": missing availability curve");
            check_series(avail->second, mg.horizon, what + " availability");
            for (std::size_t t = 0; t < mg.horizon; ++t)
                require(avail->second[t] <= u.p_max + 1e-12,
                        what + ": availability at period " + std::to_string(t) + " exceeds p_max");
        }
    }
    for (const auto& [name, curve] : mg.renewable_availability) {
        (void)curve;
        mg.unit_index(name);
    }

    if (mg.battery) {
        const Battery& b = *mg.battery;
        mg.bus_index(b.bus);
        require(finite_nonneg(b.soc_min) && b.soc_min < b.soc_max, "battery: requires 0 <= soc_min < soc_max");
        require(b.soc_min <= b.soc_initial && b.soc_initial <= b.soc_max,
                "battery: soc_initial must lie in [soc_min, soc_max]");
        require(b.p_max > 0.0, "battery: p_max must be > 0");
        require(b.eta_charge > 0.0 && b.eta_charge <= 1.0, "battery: eta_charge must be in (0, 1]");
        require(b.eta_discharge > 0.0 && b.eta_discharge <= 1.0, "battery: eta_discharge must be in (0, 1]");
        require(b.self_discharge >= 0.0 && b.self_discharge < 1.0, "battery: self_discharge must be in [0, 1)");
        require(finite_nonneg(b.usage_cost), "battery: usage_cost must be >= 0");
    }

    mg.load_bus.clear();
    for (const auto& lp : mg.load_points)
        mg.load_bus.push_back(mg.bus_index(lp.bus));
    mg.unit_bus.clear();
    for (const auto& u : mg.units)
        mg.unit_bus.push_back(mg.bus_index(u.bus));
    mg.battery_bus = mg.battery ? mg.bus_index(mg.battery->bus) : kNoIndex;

    for (auto& c : mg.contingencies) {
        require(finite_nonneg(c.lambda), "contingency '" + c.id + "': lambda must be >= 0");
        require(c.repair_time > 0.0 && std::isfinite(c.repair_time),
                "contingency '" + c.id + "': repair_time must be > 0");
        c.islanded = island_partition(mg, c.failed_element);
    }

    for (std::size_t k = 0; k < kLoadCategoryCount; ++k) {
        const auto category = static_cast<LoadCategory>(k);
        const auto& steps = mg.outage_costs.steps(category);
        require(!steps.empty(), std::string("outage cost table for ") + to_string(category) + " is empty");
        for (std::size_t s = 0; s < steps.size(); ++s) {
            require(finite_nonneg(steps[s].cost), std::string("outage cost for ") + to_string(category) +
                                                      " must be >= 0");
            if (s > 0) {
                require(steps[s].max_duration > steps[s - 1].max_duration,
                        std::string("outage cost steps for ") + to_string(category) + " must be ordered by duration");
                require(steps[s].cost >= steps[s - 1].cost,
                        std::string("outage cost for ") + to_string(category) + " must be non-decreasing");
            }
        }
    }

    if (mg.demand_response) {
        const DrProgram& dr = *mg.demand_response;
        require(dr.shiftable_fraction.size() == mg.horizon, "demand response: shiftable_fraction needs one entry per period");
        for (double f : dr.shiftable_fraction)
            require(f >= 0.0 && f < 1.0, "demand response: shiftable_fraction must be in [0, 1)");
        require(std::any_of(dr.participation.begin(), dr.participation.end(), [](bool p) { return p; }),
                "demand response: at least one load category must participate");
        require(finite_nonneg(dr.shift_cost), "demand response: shift_cost must be >= 0");
    }

    if (mg.judgment_matrix) {
        const auto& m = *mg.judgment_matrix;
        require(m.size() == 4, "judgment matrix must be 4x4");
        for (const auto& row : m)
            require(row.size() == 4, "judgment matrix must be 4x4");
    }
    if (mg.direct_weights) {
        const auto& w = *mg.direct_weights;
        require(w.size() == 4, "direct weights need four entries");
        double sum = 0.0;
        for (double v : w) {
            require(finite_nonneg(v), "direct weights must be >= 0");
            sum += v;
        }
        require(sum > 0.0, "direct weights must not all be zero");
    }
}

std::filesystem::path benchmark_case_path()
{
    return std::filesystem::path(MGD_DATA_DIR) / "benchmark.case.json";
}

} // namespace mgd
