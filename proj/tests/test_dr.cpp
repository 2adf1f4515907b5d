#include <doctest.h>

#include <numeric>

#include "generators.hpp"
#include "mgd/dr.hpp"
#include "mgd/errors.hpp"
#include "mgd/reliability.hpp"

using namespace mgd;

namespace {

double period_total(const std::vector<LoadPoint>& loads, std::size_t t)
{
    double total = 0.0;
    for (const auto& lp : loads)
        total += lp.profile[t];
    return total;
}

double day_total(const std::vector<LoadPoint>& loads)
{
    double total = 0.0;
    for (std::size_t t = 0; t < loads.front().profile.size(); ++t)
        total += period_total(loads, t);
    return total;
}

// Energy-neutral shift inside the per-period bounds, built from random
// pairwise moves.
std::vector<double> random_shift(gen::Rng& rng, const MicrogridCase& mg)
{
    const auto demand = participating_demand(mg);
    std::vector<double> s(mg.horizon, 0.0);
    const int last = static_cast<int>(mg.horizon) - 1;
    for (int move = 0; move < 12; ++move) {
        const auto from = static_cast<std::size_t>(rng.integer(0, last));
        const auto to = static_cast<std::size_t>(rng.integer(0, last));
        const double room = mg.demand_response->shiftable_fraction[from] * demand[from] + s[from];
        const double amount = rng.uniform(0.0, 0.9) * room;
        s[from] -= amount;
        s[to] += amount;
    }
    return s;
}

} // namespace

TEST_CASE("dr: zero shift leaves the case unchanged")
{
    const auto mg = load_case(benchmark_case_path());
    const std::vector<double> zero(mg.horizon, 0.0);
    CHECK(apply_shift(mg, zero) == mg.load_points);
}

TEST_CASE("dr: moving load between two periods")
{
    const auto mg = load_case(benchmark_case_path());
    std::vector<double> shift(mg.horizon, 0.0);
    shift[19] = -5.0;
    shift[3] = 5.0;
    const auto loads = apply_shift(mg, shift);
    for (std::size_t t = 0; t < mg.horizon; ++t) {
        const double expected = mg.total_demand(t) + shift[t];
        CHECK(period_total(loads, t) == doctest::Approx(expected).epsilon(1e-13));
    }
    // Proportional split over the participating points.
    const auto demand = participating_demand(mg);
    for (std::size_t l = 0; l < loads.size(); ++l)
        CHECK(loads[l].profile[19] ==
              doctest::Approx(mg.load_points[l].profile[19] * (1.0 - 5.0 / demand[19])).epsilon(1e-13));
}

TEST_CASE("dr: invalid shifts are rejected")
{
    const auto mg = load_case(benchmark_case_path());
    std::vector<double> shift(mg.horizon, 0.0);
    shift[5] = 1.0;
    CHECK_THROWS_AS(apply_shift(mg, shift), ValidationError);

    const auto demand = participating_demand(mg);
    std::vector<double> deep(mg.horizon, 0.0);
    deep[19] = -0.5 * demand[19];
    deep[3] = 0.5 * demand[19];
    CHECK_THROWS_AS(apply_shift(mg, deep), ValidationError);

    CHECK_THROWS_AS(apply_shift(mg, std::vector<double>(3, 0.0)), ValidationError);
}

TEST_CASE("dr: accepted shifts are energy neutral")
{
    const auto mg = load_case(benchmark_case_path());
    const double before = day_total(mg.load_points);
    gen::Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto shift = random_shift(rng, mg);
        const auto loads = apply_shift(mg, shift);
        CHECK(std::abs(day_total(loads) - before) <= 1e-9 * before);
        for (const auto& lp : loads)
            for (double p : lp.profile)
                CHECK(p >= 0.0);
    }
}

TEST_CASE("dr: only participating categories move")
{
    auto mg = load_case(benchmark_case_path());
    mg.demand_response->participation = {true, false, false};
    std::vector<double> shift(mg.horizon, 0.0);
    shift[19] = -2.0;
    shift[3] = 2.0;
    const auto loads = apply_shift(mg, shift);
    for (std::size_t l = 0; l < loads.size(); ++l)
        if (loads[l].category != LoadCategory::Domestic)
            CHECK(loads[l].profile == mg.load_points[l].profile);
}

TEST_CASE("dr: schedules carry the shift into the evaluation")
{
    const auto mg = load_case(benchmark_case_path());
    auto schedule = DispatchSchedule::zeros(mg.units.size(), mg.horizon, true);
    schedule.dr_shift[19] = -4.0;
    schedule.dr_shift[2] = 4.0;
    const auto loads = effective_loads(mg, schedule);
    CHECK(period_total(loads, 19) == doctest::Approx(mg.total_demand(19) - 4.0));
    CHECK(period_total(loads, 2) == doctest::Approx(mg.total_demand(2) + 4.0));
}
