#include <doctest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "mgd/devices.hpp"
#include "mgd/errors.hpp"

using namespace mgd;

namespace {

DgUnit unit(const char* name, double p_min, double p_max, double slope, double fixed, bool dispatchable = true)
{
    return {name, UnitKind::MT, "B1", p_min, p_max, slope, fixed, dispatchable};
}

Battery ideal(double soc0)
{
    Battery b;
    b.soc_min = 0.0;
    b.soc_max = 1e6;
    b.p_max = 100.0;
    b.eta_charge = 1.0;
    b.eta_discharge = 1.0;
    b.self_discharge = 0.0;
    b.soc_initial = soc0;
    return b;
}

} // namespace

TEST_CASE("devices: offer curve examples")
{
    const auto fc = unit("FC", 3.0, 30.0, 2.86, 255.8);
    const auto mt = unit("MT", 6.0, 30.0, 4.37, 85.06);
    const auto pv = unit("PV1", 0.0, 3.0, 54.84, 0.0, false);
    CHECK(dg_cost(fc, 30.0, true) == doctest::Approx(341.6).epsilon(1e-12));
    CHECK(dg_cost(mt, 6.0, true) == doctest::Approx(111.28).epsilon(1e-12));
    CHECK(dg_cost(pv, 0.0) == 0.0);
    CHECK(dg_cost(mt, 0.0, false) == 0.0);
    CHECK(dg_cost(mt, 0.0) == 0.0);
}

TEST_CASE("devices: offer curve range errors")
{
    const auto mt = unit("MT", 6.0, 30.0, 4.37, 85.06);
    CHECK_THROWS_AS(dg_cost(mt, 31.0, true), ValidationError);
    CHECK_THROWS_AS(dg_cost(mt, -1.0, true), ValidationError);
    CHECK_THROWS_AS(dg_cost(mt, 3.0, true), ValidationError);
    CHECK_THROWS_AS(dg_cost(mt, 10.0, false), ValidationError);
}

TEST_CASE("devices: offer curve is affine on its range")
{
    gen::Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const double p_min = rng.uniform(0.0, 10.0);
        const auto u = unit("U", p_min, p_min * 3.0 + 10.0, rng.uniform(0.0, 60.0), rng.uniform(0.0, 300.0));
        const double p1 = rng.uniform(p_min, 0.5 * u.p_max);
        const double p2 = rng.uniform(p_min, u.p_max - p1);
        if (p1 + p2 > u.p_max || p2 < p_min)
            continue;
        CHECK(dg_cost(u, p1, true) + dg_cost(u, p2, true) - u.cost_fixed ==
              doctest::Approx(dg_cost(u, p1 + p2, true)).epsilon(1e-12));
    }
}

TEST_CASE("devices: state of charge examples")
{
    auto b = ideal(20.0);
    const std::vector<double> charge{4.0};
    CHECK(soc_trajectory(b, charge, 1.0)[0] == 24.0);

    b.eta_discharge = 0.9;
    const std::vector<double> discharge{-4.0};
    CHECK(soc_trajectory(b, discharge, 1.0)[0] == doctest::Approx(20.0 - 4.0 / 0.9).epsilon(1e-15));

    auto decay = ideal(40.0);
    decay.self_discharge = 0.01;
    const std::vector<double> idle(24, 0.0);
    const auto soc = soc_trajectory(decay, idle, 1.0);
    for (std::size_t t = 0; t < soc.size(); ++t)
        CHECK(soc[t] == doctest::Approx(40.0 * std::pow(0.99, static_cast<double>(t + 1))).epsilon(1e-13));
}

TEST_CASE("devices: lossless battery conserves energy")
{
    gen::Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto b = ideal(static_cast<double>(rng.integer(0, 100)));
        const double dt = rng.coin() ? 1.0 : 0.25;
        std::vector<double> power(24);
        double net = 0.0;
        for (auto& p : power) {
            // Quarter-kW steps keep every partial sum exact.
            p = 0.25 * rng.integer(-40, 40);
            net += p * dt;
        }
        const auto soc = soc_trajectory(b, power, dt);
        CHECK(soc.back() - b.soc_initial == net);
    }
}

TEST_CASE("devices: round trip returns the product of efficiencies")
{
    gen::Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        auto b = ideal(50.0);
        b.eta_charge = rng.uniform(0.5, 1.0);
        b.eta_discharge = rng.uniform(0.5, 1.0);
        const double energy = rng.uniform(0.1, 20.0);
        // Draw `energy` from the network, then discharge everything stored.
        const double stored = b.eta_charge * energy;
        const std::vector<double> power{energy, -stored * b.eta_discharge};
        const auto soc = soc_trajectory(b, power, 1.0);
        CHECK(std::abs(soc[1] - b.soc_initial) < 1e-12);
        CHECK(std::abs(-power[1] - b.eta_charge * b.eta_discharge * energy) < 1e-12);
    }
}

TEST_CASE("devices: battery feasibility")
{
    Battery b;
    b.soc_min = 16.0;
    b.soc_max = 40.0;
    b.p_max = 4.0;
    b.eta_charge = 1.0;
    b.self_discharge = 0.0;
    b.soc_initial = 16.0;
    const std::vector<double> charge(24, 4.0);
    const auto v = battery_feasibility(b, charge);
    REQUIRE(!v.empty());
    // 16 + 4 (t + 1) first exceeds 40 at index 6.
    CHECK(v.front().hour == 6);
    CHECK(v.front().bound == BatteryBound::SocMax);
    CHECK(v.front().magnitude == doctest::Approx(4.0));

    const std::vector<double> idle(24, 0.0);
    CHECK(battery_feasibility(b, idle).empty());

    b.soc_initial = 30.0;
    std::vector<double> spike(24, 0.0);
    spike[7] = 5.0;
    const auto p = battery_feasibility(b, spike);
    REQUIRE(p.size() == 1);
    CHECK(p[0].hour == 7);
    CHECK(p[0].bound == BatteryBound::Power);
}

TEST_CASE("devices: battery feasibility agrees with a stepwise recomputation")
{
    gen::Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Battery b;
        b.soc_min = 16.0;
        b.soc_max = 40.0;
        b.p_max = 4.0;
        b.soc_initial = rng.uniform(16.0, 40.0);
        std::vector<double> power(24);
        for (auto& p : power)
            p = rng.uniform(-5.0, 5.0);
        std::size_t expected = 0;
        double level = b.soc_initial;
        for (double p : power) {
            level = level * (1.0 - b.self_discharge) + (p > 0 ? b.eta_charge * p : p / b.eta_discharge);
            expected += (std::abs(p) > b.p_max) + (level < b.soc_min) + (level > b.soc_max);
        }
        CHECK(battery_feasibility(b, power).size() == expected);
    }
}

TEST_CASE("devices: grid feasibility")
{
    const std::vector<double> flat(24, 150.0);
    CHECK(grid_feasibility(300.0, flat).empty());

    auto peak = flat;
    peak[19] = 310.0;
    const auto v = grid_feasibility(300.0, peak);
    REQUIRE(v.size() == 1);
    CHECK(v[0].hour == 19);
    CHECK(v[0].bound == GridBound::Import);
    CHECK(v[0].magnitude == doctest::Approx(10.0));

    const std::vector<double> exporting(24, -200.0);
    CHECK(grid_feasibility(300.0, exporting).empty());
    CHECK(grid_feasibility(300.0, exporting, 0.0).size() == 24);
}
