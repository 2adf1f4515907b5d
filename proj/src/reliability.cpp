#include "mgd/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "mgd/dr.hpp"
#include "mgd/errors.hpp"
#include "mgd/format.hpp"

namespace mgd {

const char* to_string(LoadCategory category)
{
    switch (category) {
    case LoadCategory::Domestic: return "domestic";
    case LoadCategory::Industrial: return "industrial";
    case LoadCategory::Commercial: return "commercial";
    }
    return "?";
}

LoadCategory load_category_from_string(const std::string& text)
{
    if (text == "domestic") return LoadCategory::Domestic;
    if (text == "industrial") return LoadCategory::Industrial;
    if (text == "commercial") return LoadCategory::Commercial;
    throw ParseError("unknown load category '" + text + "'");
}

OutageCostTable::OutageCostTable()
{
    const double inf = std::numeric_limits<double>::infinity();
    steps_[static_cast<std::size_t>(LoadCategory::Domestic)] = {{inf, 50.0}};
    steps_[static_cast<std::size_t>(LoadCategory::Industrial)] = {{inf, 100.0}};
    steps_[static_cast<std::size_t>(LoadCategory::Commercial)] = {{inf, 150.0}};
}

OutageCostTable OutageCostTable::flat(double domestic, double industrial, double commercial)
{
    OutageCostTable table;
    const double inf = std::numeric_limits<double>::infinity();
    table.set_steps(LoadCategory::Domestic, {{inf, domestic}});
    table.set_steps(LoadCategory::Industrial, {{inf, industrial}});
    table.set_steps(LoadCategory::Commercial, {{inf, commercial}});
    return table;
}

void OutageCostTable::set_steps(LoadCategory category, std::vector<Step> steps)
{
    steps_[static_cast<std::size_t>(category)] = std::move(steps);
}

const std::vector<OutageCostTable::Step>& OutageCostTable::steps(LoadCategory category) const
{
    return steps_[static_cast<std::size_t>(category)];
}

double OutageCostTable::cost(LoadCategory category, double duration) const
{
    const auto& s = steps(category);
    for (const auto& step : s)
        if (duration <= step.max_duration)
            return step.cost;
    return s.empty() ? 0.0 : s.back().cost;
}

std::vector<bool> island_partition(const MicrogridCase& mg, const std::string& element)
{
    std::vector<bool> islanded(mg.buses.size(), false);
    if (element == kTransformerElement) {
        islanded.assign(mg.buses.size(), true);
        return islanded;
    }
    std::size_t failed = kNoIndex;
    for (std::size_t b = 0; b < mg.branches.size(); ++b)
        if (mg.branches[b].id == element)
            failed = b;
    if (failed == kNoIndex)
        throw ValidationError("unknown contingency element '" + element + "'");

    const RadialNetwork& net = mg.network;
    islanded[net.downstream_bus[failed]] = true;
    // Branches are ordered leaves first, so walking the order backwards visits
    // parents before children.
    for (auto it = net.order.rbegin(); it != net.order.rend(); ++it)
        if (islanded[net.upstream_bus[*it]])
            islanded[net.downstream_bus[*it]] = true;
    return islanded;
}

Restoration restoration(const MicrogridCase& mg, std::size_t hour, const std::vector<bool>& islanded,
                        std::span<const double> bus_load_kw, double soc, double repair_time)
{
    Restoration r;
    for (std::size_t i = 0; i < mg.buses.size(); ++i)
        if (islanded[i])
            r.s_out += bus_load_kw[i];
    if (r.s_out <= 0.0)
        return {};

    double dg_capability = 0.0;
    for (std::size_t u = 0; u < mg.units.size(); ++u)
        if (islanded[mg.unit_bus[u]])
            dg_capability += mg.unit_cap(u, hour);
    r.s_rdg = std::min(r.s_out, dg_capability);

    if (mg.battery && islanded[mg.battery_bus]) {
        const Battery& b = *mg.battery;
        const double energy_limited = std::max(0.0, (soc - b.soc_min) / repair_time);
        r.s_rst = std::max(0.0, std::min({r.s_out - r.s_rdg, b.p_max, energy_limited}));
    }
    return r;
}

std::vector<LoadPoint> effective_loads(const MicrogridCase& mg, const DispatchSchedule& schedule)
{
    if (schedule.has_dr() && mg.demand_response) {
        std::vector<double> shift(schedule.dr_shift.data(), schedule.dr_shift.data() + schedule.dr_shift.size());
        return distribute_shift(mg, shift);
    }
    return mg.load_points;
}

std::vector<double> schedule_soc(const MicrogridCase& mg, const DispatchSchedule& schedule)
{
    if (!mg.battery)
        return {};
    return soc_trajectory(*mg.battery,
                          std::span<const double>(schedule.battery_power.data(), schedule.horizon()),
                          mg.period_length);
}

namespace {

struct IslandLoad {
    double total = 0.0;
    std::array<double, kLoadCategoryCount> by_category{};
};

template <typename Visitor>
void for_each_term(const MicrogridCase& mg, const DispatchSchedule& schedule, std::span<const double> soc,
                   Visitor&& visit)
{
    const auto loads = effective_loads(mg, schedule);
    std::vector<double> bus_load(mg.buses.size());
    for (std::size_t t = 0; t < mg.horizon; ++t) {
        std::fill(bus_load.begin(), bus_load.end(), 0.0);
        for (std::size_t l = 0; l < loads.size(); ++l)
            bus_load[mg.load_bus[l]] += loads[l].profile[t];
        const double level = soc.empty() ? 0.0 : soc[t];
        for (std::size_t j = 0; j < mg.contingencies.size(); ++j) {
            const Contingency& c = mg.contingencies[j];
            const Restoration r = restoration(mg, t, c.islanded, bus_load, level, c.repair_time);
            IslandLoad island;
            for (std::size_t l = 0; l < loads.size(); ++l)
                if (c.islanded[mg.load_bus[l]]) {
                    island.total += loads[l].profile[t];
                    island.by_category[static_cast<std::size_t>(loads[l].category)] += loads[l].profile[t];
                }
            double outage_cost = 0.0; // EUR ct/kWh, demand-weighted over categories
            if (island.total > 0.0)
                for (std::size_t k = 0; k < kLoadCategoryCount; ++k)
                    outage_cost += mg.outage_costs.cost(static_cast<LoadCategory>(k), c.repair_time) *
                                   island.by_category[k] / island.total;
            const double cost = outage_cost * c.lambda * r.shortfall() * c.repair_time;
            visit(j, t, r, cost);
        }
    }
}

} // namespace

Restoration restoration(const MicrogridCase& mg, const DispatchSchedule& schedule, std::size_t hour,
                        const std::vector<bool>& islanded, double repair_time)
{
    const auto loads = effective_loads(mg, schedule);
    std::vector<double> bus_load(mg.buses.size(), 0.0);
    for (std::size_t l = 0; l < loads.size(); ++l)
        bus_load[mg.load_bus[l]] += loads[l].profile[hour];
    const auto soc = schedule_soc(mg, schedule);
    return restoration(mg, hour, islanded, bus_load, soc.empty() ? 0.0 : soc[hour], repair_time);
}

std::vector<ContingencyRecord> contingency_report(const MicrogridCase& mg, const DispatchSchedule& schedule,
                                                  std::span<const double> soc)
{
    std::vector<ContingencyRecord> records;
    for_each_term(mg, schedule, soc, [&](std::size_t j, std::size_t t, const Restoration& r, double cost) {
        records.push_back({j, t, r, cost});
    });
    return records;
}

double unsupplied_energy_cost(const MicrogridCase& mg, const DispatchSchedule& schedule, std::span<const double> soc)
{
    double total = 0.0;
    for_each_term(mg, schedule, soc,
                  [&](std::size_t, std::size_t, const Restoration&, double cost) { total += cost; });
    return total;
}

void write_contingency_csv(std::ostream& out, const MicrogridCase& mg, const std::vector<ContingencyRecord>& records)
{
    out << "contingency,element,hour,s_out_kw,s_rdg_kw,s_rst_kw,shortfall_kw,cost_eur_ct\n";
    for (const auto& r : records) {
        const Contingency& c = mg.contingencies[r.contingency];
        out << c.id << ',' << c.failed_element << ',' << r.hour + 1 << ',' << fmt_num(r.restored.s_out) << ','
            << fmt_num(r.restored.s_rdg) << ',' << fmt_num(r.restored.s_rst) << ','
            << fmt_num(r.restored.shortfall()) << ',' << fmt_num(r.cost) << '\n';
    }
}

} // namespace mgd
