#include <doctest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "mgd/errors.hpp"
#include "mgd/reliability.hpp"
#include "oracles/unsupplied_enumeration.hpp"

using namespace mgd;

namespace {

std::vector<bool> buses_named(const MicrogridCase& mg, std::initializer_list<const char*> ids)
{
    std::vector<bool> out(mg.buses.size(), false);
    for (const char* id : ids)
        out[mg.bus_index(id)] = true;
    return out;
}

MicrogridCase single_lateral()
{
    auto mg = fixture::chain(2);
    fixture::add_load(mg, 1, 10.0);
    return mg;
}

} // namespace

TEST_CASE("reliability: island partitions")
{
    const auto mg = load_case(benchmark_case_path());
    CHECK(island_partition(mg, "transformer") == std::vector<bool>(mg.buses.size(), true));
    CHECK(island_partition(mg, "L5") == buses_named(mg, {"B5"}));
    CHECK(island_partition(mg, "L6") == buses_named(mg, {"B6", "B7", "B8"}));
    CHECK(island_partition(mg, "L11") == buses_named(mg, {"B11", "B12", "B13"}));
    CHECK_THROWS_AS(island_partition(mg, "L99"), ValidationError);

    for (const auto& br : mg.branches)
        CHECK(island_partition(mg, br.id) == oracle::islanded_buses(mg, br.id));
}

TEST_CASE("reliability: restoration cascade examples")
{
    auto mg = single_lateral();
    mg.units.push_back({"FC", UnitKind::FC, "B1", 3.0, 30.0, 2.86, 255.8, true});
    fixture::finish(mg);
    const std::vector<double> load{0.0, 10.0};

    const auto none = restoration(mg, 0, std::vector<bool>{false, false}, load, 0.0, 1.0);
    CHECK(none.s_out == 0.0);
    CHECK(none.s_rdg == 0.0);
    CHECK(none.s_rst == 0.0);

    const auto covered = restoration(mg, 0, std::vector<bool>{false, true}, load, 0.0, 1.0);
    CHECK(covered.s_out == 10.0);
    CHECK(covered.s_rdg == 10.0);
    CHECK(covered.s_rst == 0.0);

    auto storage = single_lateral();
    Battery b;
    b.bus = "B1";
    b.soc_min = 16.0;
    b.soc_max = 40.0;
    b.p_max = 4.0;
    b.soc_initial = 18.0;
    storage.battery = b;
    fixture::finish(storage);
    const auto r = restoration(storage, 0, std::vector<bool>{false, true}, load, 18.0, 1.0);
    CHECK(r.s_out == 10.0);
    CHECK(r.s_rdg == 0.0);
    CHECK(r.s_rst == doctest::Approx(2.0));
    CHECK(r.shortfall() == doctest::Approx(8.0));
}

TEST_CASE("reliability: closed forms")
{
    auto mg = single_lateral();
    mg.contingencies.push_back({"F", "L1", 0.001, 2.0, {}});
    fixture::finish(mg);
    const auto schedule = DispatchSchedule::zeros(0, 24);
    // 24 h of a 10 kW shortfall priced at 50.
    CHECK(unsupplied_energy_cost(mg, schedule, {}) == doctest::Approx(24.0 * 50.0 * 0.001 * 10.0 * 2.0));

    mg.contingencies[0].lambda = 0.0;
    CHECK(unsupplied_energy_cost(mg, schedule, {}) == 0.0);
}

TEST_CASE("reliability: benchmark matches exhaustive enumeration")
{
    const auto mg = load_case(benchmark_case_path());
    for (double battery_kw : {0.0, -0.5, 1.5}) {
        auto schedule = DispatchSchedule::zeros(mg.units.size(), mg.horizon);
        schedule.battery_power.setConstant(battery_kw);
        const auto soc = schedule_soc(mg, schedule);
        const double f3 = unsupplied_energy_cost(mg, schedule, soc);
        CHECK(f3 == doctest::Approx(oracle::unsupplied_cost(mg, battery_kw)).epsilon(1e-12));
        CHECK(f3 > 0.0);
    }
}

TEST_CASE("reliability: shortfall never grows with state of charge")
{
    const auto mg = load_case(benchmark_case_path());
    gen::Rng rng(5);
    std::vector<double> load(mg.buses.size());
    for (int trial = 0; trial < 200; ++trial) {
        for (auto& l : load)
            l = rng.uniform(0.0, 15.0);
        const auto& c = mg.contingencies[static_cast<std::size_t>(rng.integer(0, 3))];
        const auto t = static_cast<std::size_t>(rng.integer(0, 23));
        const double soc = rng.uniform(16.0, 40.0);
        const auto lo = restoration(mg, t, c.islanded, load, soc, c.repair_time);
        const auto hi = restoration(mg, t, c.islanded, load, soc + rng.uniform(0.0, 10.0), c.repair_time);
        CHECK(hi.shortfall() <= lo.shortfall());
        CHECK(lo.shortfall() >= 0.0);
        CHECK(lo.s_rdg + lo.s_rst <= lo.s_out + 1e-12);
    }
}

TEST_CASE("reliability: more in-island capability never raises the cost")
{
    const auto base = load_case(benchmark_case_path());
    const auto schedule = DispatchSchedule::zeros(base.units.size(), base.horizon);
    gen::Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        auto mg = base;
        const double before = unsupplied_energy_cost(mg, schedule, schedule_soc(mg, schedule));
        const auto u = static_cast<std::size_t>(rng.integer(0, 4));
        auto& unit = mg.units[u];
        if (unit.dispatchable) {
            unit.p_max += rng.uniform(0.0, 20.0);
        } else {
            unit.p_max += 5.0;
            auto& curve = mg.renewable_availability[unit.name];
            curve[static_cast<std::size_t>(rng.integer(0, 23))] += rng.uniform(0.0, 5.0);
        }
        fixture::finish(mg);
        CHECK(unsupplied_energy_cost(mg, schedule, schedule_soc(mg, schedule)) <= before);
    }
}
