#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "mgd/dispatch_problem.hpp"
#include "mgd/dr.hpp"
#include "mgd/gradient.hpp"
#include "mgd/scenario.hpp"

using namespace mgd;
using Eigen::VectorXd;

namespace {

const MicrogridCase& benchmark()
{
    static const MicrogridCase mg = load_case(benchmark_case_path());
    return mg;
}

VectorXd random_box(gen::Rng& rng, const VectorXd& lo, const VectorXd& hi)
{
    VectorXd x(lo.size());
    for (long i = 0; i < x.size(); ++i)
        x[i] = rng.uniform(lo[i], hi[i]);
    return x;
}

RunOptions small_budget()
{
    RunOptions o;
    o.ga.population = 12;
    o.ga.generations = 4;
    o.sqp.max_iterations = 8;
    o.flip_passes = 0;
    return o;
}

} // namespace

TEST_CASE("gradient: affine and quadratic functions")
{
    gen::Rng rng(51);
    const VectorXd c = rng.vector(6, -3.0, 3.0);
    const VectorXd x = rng.vector(6, -10.0, 10.0);
    const auto g = gradient([&](const VectorXd& v) { return c.dot(v) + 4.0; }, x);
    CHECK((g - c).cwiseAbs().maxCoeff() < 1e-8);

    const Eigen::MatrixXd a = rng.spd(6);
    const auto q = gradient([&](const VectorXd& v) { return v.dot(a * v); }, x, 1e-5, 3);
    CHECK((q - 2.0 * a * x).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(q == gradient([&](const VectorXd& v) { return v.dot(a * v); }, x, 1e-5, 1));
}

TEST_CASE("dispatch: encodings round trip")
{
    const DispatchProblem problem(benchmark(), ObjectiveSpec::single(Objective::Cost, 1.0), true);
    gen::Rng rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        const VectorXd x = random_box(rng, problem.compact_lower(), problem.compact_upper());
        CHECK(problem.to_compact(problem.to_schedule(x)) == x);
        CHECK((problem.compact_from_split(problem.split_from_compact(x)) - x).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(problem.split_size() == problem.compact_size() + static_cast<long>(benchmark().horizon));
}

TEST_CASE("dispatch: repair produces device-feasible schedules")
{
    const auto& mg = benchmark();
    const DispatchProblem problem(mg, ObjectiveSpec::single(Objective::Cost, 1.0), true);
    gen::Rng rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        const VectorXd x = problem.repair(random_box(rng, problem.compact_lower(), problem.compact_upper()));
        const auto s = problem.to_schedule(x);
        for (std::size_t u = 0; u < mg.units.size(); ++u) {
            if (!mg.units[u].committable())
                continue;
            for (std::size_t t = 0; t < mg.horizon; ++t) {
                const double p = s.dg_setpoints(static_cast<long>(u), static_cast<long>(t));
                CHECK((p == 0.0 || p >= mg.units[u].p_min - 1e-12));
            }
        }
        const std::vector<double> power(s.battery_power.data(), s.battery_power.data() + s.battery_power.size());
        CHECK(battery_feasibility(*mg.battery, power, mg.period_length, 1e-9).empty());
        CHECK(std::abs(s.dr_shift.sum()) < 1e-9);
        std::vector<double> shift(s.dr_shift.data(), s.dr_shift.data() + s.dr_shift.size());
        CHECK_NOTHROW(apply_shift(mg, shift, 1e-9));
    }
}

TEST_CASE("dispatch: central differences agree with one-sided ones to first order")
{
    const auto& mg = benchmark();
    const DispatchProblem problem(mg, ObjectiveSpec::single(Objective::Loss, 44.0), false);
    gen::Rng rng(54);
    VectorXd x = problem.split_from_compact(
        problem.repair(random_box(rng, problem.compact_lower(), problem.compact_upper())));
    // Keep committable units strictly on so the objective is smooth here.
    const auto f = [&](const VectorXd& v) { return problem.evaluate_split(v).objective; };
    const VectorXd central = gradient(f, x, 1e-5);
    const VectorXd forward = forward_gradient(f, x, 1e-5);
    const VectorXd finer = forward_gradient(f, x, 5e-6);
    // Forward differences converge linearly: halving h halves the gap.
    const double gap = (forward - central).cwiseAbs().maxCoeff();
    const double gap_finer = (finer - central).cwiseAbs().maxCoeff();
    CHECK(gap < 1e-3 * std::max(1.0, central.cwiseAbs().maxCoeff()));
    CHECK(gap_finer <= 0.75 * gap + 1e-9);
}

TEST_CASE("scenario: initial state is the zero schedule")
{
    const auto& mg = benchmark();
    const auto r = run_scenario(mg, Scenario::Initial, default_weights(mg), RunOptions{});
    CHECK(r.schedule.dg_setpoints.isZero(0.0));
    CHECK(r.schedule.battery_power.isZero(0.0));
    const auto ev = evaluate_schedule(mg, r.schedule);
    CHECK(r.bundle.raw() == ev.bundle.raw());
    CHECK(r.feasible);
}

TEST_CASE("scenario: labels and seeds")
{
    CHECK(scenario_label(Scenario::Initial, false) == "Initial state");
    CHECK(scenario_label(Scenario::Loss, false) == "Second scenario");
    CHECK(scenario_label(Scenario::Combined, false) == "Fifth scenario without DR");
    CHECK(scenario_label(Scenario::Combined, true) == "Fifth scenario with DR");
    CHECK(scenario_seed(42, Scenario::Cost, false) != scenario_seed(42, Scenario::Loss, false));
    CHECK(scenario_seed(42, Scenario::Combined, false) != scenario_seed(42, Scenario::Combined, true));
    CHECK_THROWS(scenario_from_int(6));
}

TEST_CASE("scenario: weights fall back from direct to judgment matrix")
{
    auto mg = benchmark();
    const auto direct = default_weights(mg);
    CHECK(direct[1] == doctest::Approx(0.483));
    mg.direct_weights.reset();
    const auto ahp = default_weights(mg);
    double sum = 0.0;
    for (double w : ahp)
        sum += w;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(std::abs(ahp[1] - 0.483) < 0.02);
}

TEST_CASE("scenario: cost run improves on the grid-only schedule")
{
    const auto& mg = benchmark();
    const auto baseline = run_baseline(mg);
    const auto r = run_single(mg, Objective::Cost, small_budget());
    CHECK(r.feasible);
    CHECK(r.diagnostics.seed_objective <= baseline.bundle.f1_cost);
    CHECK(r.bundle.f1_cost <= r.diagnostics.seed_objective + 1e-9);
    CHECK(r.objective == r.bundle.f1_cost);
}

TEST_CASE("scenario: zero shiftable fraction reproduces the no-DR result")
{
    auto mg = benchmark();
    mg.demand_response->shiftable_fraction.assign(mg.horizon, 0.0);
    const auto baseline = run_baseline(mg);
    ScalarizationSetup setup;
    setup.weights = default_weights(mg);
    for (std::size_t k = 0; k < kObjectiveCount; ++k) {
        setup.bounds[k].max = baseline.bundle.raw()[k];
        setup.bounds[k].min = 0.5 * baseline.bundle.raw()[k];
    }
    const auto options = small_budget();
    const auto without = run_scalarized(mg, setup, options);
    const auto with = optimize_with_dr(mg, setup, without, options);
    CHECK(with.schedule.dr_shift.isZero(0.0));
    CHECK(with.objective <= without.objective + 1e-9);
}
