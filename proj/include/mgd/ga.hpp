#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace mgd {

struct GaConfig {
    std::size_t population = 60;
    std::size_t generations = 150;
    std::size_t tournament = 3;
    double crossover_rate = 0.9;
    double sbx_eta = 15.0;
    double mutation_rate = 0.0;   // per gene; 0 means 1/n
    double mutation_sigma = 0.1;  // fraction of the gene's range
    double penalty = 1e4;         // exterior penalty weight, doubled on plateaus
    double penalty_cap = 1e12;
    std::size_t plateau_generations = 10;
    std::size_t elite = 2;
    double feasibility_tolerance = 1e-6;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct GaEvaluation {
    double objective = 0.0;
    double violation = 0.0; // >= 0, max-norm of normalised constraint violations
};

struct GaProblem {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    // Maps a point inside the box to a point that satisfies the constraints
    // the problem can fix directly (optional).
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> repair;
    std::function<GaEvaluation(const Eigen::VectorXd&)> evaluate;
};

struct GaResult {
    Eigen::VectorXd best;
    GaEvaluation evaluation;
    bool feasible = false;
    double final_penalty = 0.0;
    std::size_t evaluations = 0;
    std::vector<GaEvaluation> history; // best individual per generation
};

// Real-coded GA with tournament selection, SBX crossover, Gaussian mutation,
// elitism and an adaptive exterior penalty. `seeds` are injected into the
// first generation after repair. Results do not depend on `threads`.
GaResult ga_seed(const GaProblem& problem, const GaConfig& config,
                 const std::vector<Eigen::VectorXd>& seeds = {});

// Stateless 64-bit mixer used to derive independent seeds from a run seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace mgd
