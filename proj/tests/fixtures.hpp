#pragma once

// Programmatic cases for the unit tests.

#include <string>
#include <vector>

#include "generators.hpp"
#include "mgd/netmodel.hpp"

namespace fixture {

inline std::string bus_name(int i) { return "B" + std::to_string(i); }

// Slack bus only; callers append buses, branches and devices and then call
// finish().
inline mgd::MicrogridCase empty_case(std::size_t horizon = 24)
{
    mgd::MicrogridCase mg;
    mg.name = "fixture";
    mg.horizon = horizon;
    mg.buses.push_back({bus_name(0), mgd::BusKind::Slack, 0.4});
    mg.prices.grid_price.assign(horizon, 10.0);
    return mg;
}

inline void add_bus(mgd::MicrogridCase& mg, int parent, double r, double x)
{
    const int id = static_cast<int>(mg.buses.size());
    mg.buses.push_back({bus_name(id), mgd::BusKind::Load, 0.4});
    mg.branches.push_back({"L" + std::to_string(id), bus_name(parent), bus_name(id), r, x});
}

inline void add_load(mgd::MicrogridCase& mg, int bus, double kw, double pf = 0.9,
                     mgd::LoadCategory category = mgd::LoadCategory::Domestic)
{
    mg.load_points.push_back({bus_name(bus), category, std::vector<double>(mg.horizon, kw), pf});
}

inline mgd::MicrogridCase& finish(mgd::MicrogridCase& mg)
{
    mgd::validate_case(mg);
    return mg;
}

// Chain slack - B1 - ... - B(n-1).
inline mgd::MicrogridCase chain(int n, double r = 0.05, double x = 0.02, std::size_t horizon = 24)
{
    auto mg = empty_case(horizon);
    for (int i = 1; i < n; ++i)
        add_bus(mg, i - 1, r, x);
    return mg;
}

// Random radial network with n buses: each new bus hangs off a random earlier
// one. One load per non-slack bus.
inline mgd::MicrogridCase random_radial(gen::Rng& rng, int n)
{
    auto mg = empty_case(1);
    for (int i = 1; i < n; ++i) {
        add_bus(mg, rng.integer(0, i - 1), rng.uniform(0.01, 0.1), rng.uniform(0.0, 0.05));
        add_load(mg, i, rng.uniform(0.0, 20.0), rng.uniform(0.8, 1.0));
    }
    return finish(mg);
}

} // namespace fixture
