#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mgd/ga.hpp"

using namespace mgd;
using Eigen::VectorXd;

namespace {

// One generator against a grid over 24 periods, quadratic offer curve, no
// network: each period's optimum is clamp((price - b) / (2 a), 0, p_max).
struct EconomicDispatch {
    double a = 0.05, b = 2.0, p_max = 50.0, demand = 60.0;
    VectorXd price = VectorXd::LinSpaced(24, 3.0, 8.0);

    double cost(const VectorXd& p) const
    {
        double total = 0.0;
        for (long t = 0; t < p.size(); ++t)
            total += a * p[t] * p[t] + b * p[t] + price[t] * (demand - p[t]);
        return total;
    }

    VectorXd analytic() const
    {
        VectorXd p(price.size());
        for (long t = 0; t < p.size(); ++t)
            p[t] = std::clamp((price[t] - b) / (2.0 * a), 0.0, p_max);
        return p;
    }

    GaProblem problem() const
    {
        GaProblem pr;
        pr.lower = VectorXd::Zero(price.size());
        pr.upper = VectorXd::Constant(price.size(), p_max);
        pr.evaluate = [this](const VectorXd& p) { return GaEvaluation{cost(p), 0.0}; };
        return pr;
    }
};

} // namespace

TEST_CASE("ga: single-unit dispatch within five percent of the analytic optimum")
{
    const EconomicDispatch ed;
    GaConfig config;
    config.seed = 17;
    const auto result = ga_seed(ed.problem(), config);
    const double optimum = ed.cost(ed.analytic());
    CHECK(result.feasible);
    CHECK(result.evaluation.objective <= optimum + 0.05 * std::abs(optimum));
    CHECK(result.evaluation.objective >= optimum - 1e-9);
    CHECK(result.history.size() == config.generations + 1);
}

TEST_CASE("ga: fixed seed is reproducible and thread-independent")
{
    const EconomicDispatch ed;
    GaConfig config;
    config.generations = 40;
    config.seed = 5;
    const auto a = ga_seed(ed.problem(), config);
    const auto b = ga_seed(ed.problem(), config);
    config.threads = 4;
    const auto c = ga_seed(ed.problem(), config);
    CHECK(a.best == b.best);
    CHECK(a.best == c.best);
    CHECK(a.evaluation.objective == c.evaluation.objective);

    config.seed = 6;
    CHECK(ga_seed(ed.problem(), config).best != a.best);
}

TEST_CASE("ga: best individual is non-increasing and stays in the box")
{
    const EconomicDispatch ed;
    GaConfig config;
    config.generations = 60;
    const auto r = ga_seed(ed.problem(), config);
    for (std::size_t g = 1; g < r.history.size(); ++g)
        CHECK(r.history[g].objective <= r.history[g - 1].objective);
    CHECK((r.best.array() >= 0.0).all());
    CHECK((r.best.array() <= ed.p_max).all());
}

TEST_CASE("ga: penalty drives the search to the feasible side")
{
    // min -sum(x) subject to sum(x) <= 3 on [0, 1]^6.
    GaProblem pr;
    pr.lower = VectorXd::Zero(6);
    pr.upper = VectorXd::Ones(6);
    pr.evaluate = [](const VectorXd& x) { return GaEvaluation{-x.sum(), std::max(0.0, x.sum() - 3.0)}; };
    GaConfig config;
    config.seed = 9;
    const auto r = ga_seed(pr, config);
    CHECK(r.feasible);
    CHECK(r.best.sum() <= 3.0 + config.feasibility_tolerance);
    CHECK(r.best.sum() >= 2.7);
}

TEST_CASE("ga: injected seeds are never lost")
{
    const EconomicDispatch ed;
    GaConfig config;
    config.generations = 3;
    config.population = 8;
    const VectorXd best = ed.analytic();
    const auto r = ga_seed(ed.problem(), config, {best});
    CHECK(r.evaluation.objective <= ed.cost(best) + 1e-9);
}

TEST_CASE("ga: seed splitting")
{
    CHECK(split_seed(42, 0) == split_seed(42, 0));
    CHECK(split_seed(42, 0) != split_seed(42, 1));
    CHECK(split_seed(42, 1) != split_seed(43, 1));
}
