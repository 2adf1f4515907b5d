#include "mgd/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "mgd/errors.hpp"
#include "mgd/parallel.hpp"

namespace mgd {

using Eigen::Index;
using Eigen::VectorXd;

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

struct Individual {
    VectorXd genes;
    GaEvaluation eval;
};

double fitness(const Individual& ind, double penalty)
{
    return ind.eval.objective + penalty * ind.eval.violation;
}

} // namespace

GaResult ga_seed(const GaProblem& problem, const GaConfig& config, const std::vector<VectorXd>& seeds)
{
    const Index n = problem.lower.size();
    if (problem.upper.size() != n || n == 0)
        throw ValidationError("GA bounds are empty or mismatched");
    if (config.population < 2 || config.tournament == 0)
        throw ValidationError("GA population must hold at least two individuals");

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double mutation_rate = config.mutation_rate > 0.0 ? config.mutation_rate : 1.0 / static_cast<double>(n);
    const VectorXd range = problem.upper - problem.lower;

    auto clip = [&](VectorXd x) {
        x = x.cwiseMax(problem.lower).cwiseMin(problem.upper);
        return problem.repair ? problem.repair(x) : x;
    };

    GaResult result;
    auto evaluate_all = [&](std::vector<Individual>& pop, std::size_t from) {
        parallel_for(
            pop.size() - from,
            [&](std::size_t k) {
                Individual& ind = pop[from + k];
                try {
                    ind.eval = problem.evaluate(ind.genes);
                } catch (const ConvergenceError&) {
                    ind.eval = {0.0, 1e6};
                }
                if (!std::isfinite(ind.eval.objective) || !std::isfinite(ind.eval.violation))
                    ind.eval = {0.0, 1e6};
            },
            config.threads);
        result.evaluations += pop.size() - from;
    };

    std::vector<Individual> pop;
    pop.reserve(config.population);
    for (const auto& s : seeds) {
        if (pop.size() == config.population)
            break;
        if (s.size() != n)
            throw ValidationError("GA seed has the wrong length");
        pop.push_back({clip(s), {}});
    }
    while (pop.size() < config.population) {
        VectorXd x(n);
        for (Index i = 0; i < n; ++i)
            x[i] = problem.lower[i] + unit(rng) * range[i];
        pop.push_back({clip(x), {}});
    }
    evaluate_all(pop, 0);

    const double tol = config.feasibility_tolerance;
    bool have_best = false;
    Individual best;
    auto track = [&](const Individual& ind) {
        const bool feasible = ind.eval.violation <= tol;
        const bool best_feasible = have_best && best.eval.violation <= tol;
        bool better = !have_best;
        if (have_best) {
            if (feasible != best_feasible)
                better = feasible;
            else if (feasible)
                better = ind.eval.objective < best.eval.objective;
            else
                better = ind.eval.violation < best.eval.violation;
        }
        if (better) {
            best = ind;
            have_best = true;
        }
    };

    double penalty = config.penalty;
    double plateau_value = std::numeric_limits<double>::infinity();
    std::size_t plateau = 0;

    auto order_by_fitness = [&](std::vector<Individual>& p) {
        std::stable_sort(p.begin(), p.end(), [&](const Individual& a, const Individual& b) {
            return fitness(a, penalty) < fitness(b, penalty);
        });
    };

    auto tournament = [&](const std::vector<Individual>& p) -> const Individual& {
        std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
        std::size_t winner = pick(rng);
        for (std::size_t k = 1; k < config.tournament; ++k) {
            const std::size_t c = pick(rng);
            if (fitness(p[c], penalty) < fitness(p[winner], penalty))
                winner = c;
        }
        return p[winner];
    };

    for (std::size_t gen = 0;; ++gen) {
        order_by_fitness(pop);
        for (const auto& ind : pop)
            track(ind);
        result.history.push_back(pop.front().eval);

        const double lead = fitness(pop.front(), penalty);
        if (lead < plateau_value - 1e-12 * std::max(1.0, std::abs(plateau_value))) {
            plateau_value = lead;
            plateau = 0;
        } else if (++plateau >= config.plateau_generations) {
            if (pop.front().eval.violation > tol) {
                penalty = std::min(penalty * 2.0, config.penalty_cap);
                order_by_fitness(pop);
            }
            plateau = 0;
            plateau_value = fitness(pop.front(), penalty);
        }
        if (gen == config.generations)
            break;

        std::vector<Individual> next;
        next.reserve(config.population);
        for (std::size_t e = 0; e < std::min(config.elite, pop.size()); ++e)
            next.push_back(pop[e]);
        const std::size_t first_child = next.size();
        while (next.size() < config.population) {
            VectorXd a = tournament(pop).genes;
            VectorXd b = tournament(pop).genes;
            if (unit(rng) < config.crossover_rate) {
                for (Index i = 0; i < n; ++i) {
                    if (unit(rng) >= 0.5 || range[i] <= 0.0)
                        continue;
                    const double u = unit(rng);
                    const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (config.sbx_eta + 1.0))
                                                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (config.sbx_eta + 1.0));
                    const double p1 = a[i], p2 = b[i];
                    a[i] = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2);
                    b[i] = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2);
                }
            }
            for (VectorXd* child : {&a, &b}) {
                for (Index i = 0; i < n; ++i)
                    if (unit(rng) < mutation_rate)
                        (*child)[i] += config.mutation_sigma * range[i] * normal(rng);
                if (next.size() < config.population)
                    next.push_back({clip(*child), {}});
            }
        }
        evaluate_all(next, first_child);
        pop = std::move(next);
    }

    result.best = best.genes;
    result.evaluation = best.eval;
    result.feasible = best.eval.violation <= tol;
    result.final_penalty = penalty;
    return result;
}

} // namespace mgd
