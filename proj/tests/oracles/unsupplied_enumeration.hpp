#pragma once

// Brute-force expected unsupplied-energy cost: islands by graph search on the
// branch list, own SOC recursion, every (period, contingency) pair evaluated
// from scratch.

#include <algorithm>
#include <string>
#include <vector>

#include "mgd/netmodel.hpp"

namespace oracle {

inline std::vector<bool> islanded_buses(const mgd::MicrogridCase& mg, const std::string& element)
{
    const std::size_t n = mg.buses.size();
    if (element == mgd::kTransformerElement)
        return std::vector<bool>(n, true);
    auto index = [&](const std::string& id) {
        for (std::size_t i = 0; i < n; ++i)
            if (mg.buses[i].id == id)
                return i;
        return n;
    };
    std::vector<bool> reached(n, false);
    for (std::size_t i = 0; i < n; ++i)
        if (mg.buses[i].kind == mgd::BusKind::Slack)
            reached[i] = true;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& br : mg.branches) {
            if (br.id == element)
                continue;
            const auto a = index(br.from_bus);
            const auto b = index(br.to_bus);
            if (reached[a] != reached[b]) {
                reached[a] = reached[b] = true;
                grew = true;
            }
        }
    }
    std::vector<bool> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = !reached[i];
    return out;
}

// Grid-only schedule, optional constant battery power.
inline double unsupplied_cost(const mgd::MicrogridCase& mg, double battery_kw = 0.0)
{
    std::vector<double> soc;
    if (mg.battery) {
        const auto& b = *mg.battery;
        double level = b.soc_initial;
        for (std::size_t t = 0; t < mg.horizon; ++t) {
            level = level * (1.0 - b.self_discharge) +
                    (battery_kw > 0.0 ? b.eta_charge * battery_kw : battery_kw / b.eta_discharge) * mg.period_length;
            soc.push_back(level);
        }
    }

    double total = 0.0;
    for (std::size_t t = 0; t < mg.horizon; ++t) {
        for (const auto& c : mg.contingencies) {
            const auto island = islanded_buses(mg, c.failed_element);
            auto inside = [&](const std::string& bus) {
                for (std::size_t i = 0; i < mg.buses.size(); ++i)
                    if (mg.buses[i].id == bus)
                        return static_cast<bool>(island[i]);
                return false;
            };
            double out = 0.0;
            double priced = 0.0;
            for (const auto& lp : mg.load_points)
                if (inside(lp.bus)) {
                    out += lp.profile[t];
                    priced += lp.profile[t] * mg.outage_costs.cost(lp.category, c.repair_time);
                }
            if (out <= 0.0)
                continue;
            double dg = 0.0;
            for (const auto& u : mg.units)
                if (inside(u.bus))
                    dg += u.dispatchable ? u.p_max : mg.renewable_availability.at(u.name)[t];
            const double rdg = std::min(out, dg);
            double rst = 0.0;
            if (mg.battery && inside(mg.battery->bus))
                rst = std::max(0.0, std::min({out - rdg, mg.battery->p_max,
                                              (soc[t] - mg.battery->soc_min) / c.repair_time}));
            const double shortfall = std::max(0.0, out - rdg - rst);
            total += (priced / out) * c.lambda * shortfall * c.repair_time;
        }
    }
    return total;
}

} // namespace oracle
