#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgd/devices.hpp"
#include "mgd/dispatch_problem.hpp"
#include "mgd/ga.hpp"
#include "mgd/netmodel.hpp"
#include "mgd/objectives.hpp"
#include "mgd/sqp.hpp"

namespace mgd {

enum class Scenario { Initial = 0, Cost = 1, Loss = 2, Reliability = 3, Voltage = 4, Combined = 5 };

Scenario scenario_from_int(int id);
// Row label used in comparison tables.
std::string scenario_label(Scenario scenario, bool with_dr);

struct RunOptions {
    std::uint64_t seed = 42;
    GaConfig ga;
    SqpOptions sqp;
    int flip_passes = 2;
    std::size_t threads = 0; // 0: default_thread_count()
    // Extra GA seeds and fallback candidates (compact schedules for this case).
    std::vector<DispatchSchedule> warm_starts;
};

struct ScalarizationSetup {
    BoundsVector bounds{};
    ObjectiveVector weights{};
};

struct TraceRow {
    std::string phase;
    int iteration = 0;
    double objective = 0.0;
    double merit = 0.0;
    double kkt_residual = 0.0;
    double violation = 0.0;
    double step_norm = 0.0;
    double alpha = 0.0;
    std::string qp_status;
};

struct ScenarioDiagnostics {
    std::string selected = "baseline"; // sqp, ga_seed, warm_start or baseline
    double seed_objective = 0.0;       // GA seed, official objective
    double sqp_objective = 0.0;        // refined schedule before selection
    bool seed_feasible = false;
    bool sqp_feasible = false;
    SqpStatus sqp_status = SqpStatus::Converged;
    int sqp_iterations = 0;
    double kkt_residual = 0.0;
    bool used_elastic = false;
    int commitment_flips = 0;
    std::size_t evaluations = 0;
};

struct ScenarioResult {
    Scenario scenario = Scenario::Initial;
    bool with_dr = false;
    std::uint64_t seed = 0;
    DispatchSchedule schedule;
    ObjectiveBundle bundle;
    double objective = 0.0; // what the scenario minimised, as reported
    bool feasible = true;
    double violation = 0.0;
    ScenarioDiagnostics diagnostics;
    std::vector<TraceRow> trace;
};

// Seed used by one scenario run, derived from the run seed.
std::uint64_t scenario_seed(std::uint64_t seed, Scenario scenario, bool with_dr);

// Weights for scenario 5 when none are given explicitly: the case's direct
// weights, else AHP on the case's judgment matrix, else AHP on the shipped
// default matrix.
ObjectiveVector default_weights(const MicrogridCase& microgrid);

// Grid-only schedule (all setpoints zero).
ScenarioResult run_baseline(const MicrogridCase& microgrid);

// Minimises one objective, normalised by its baseline value.
ScenarioResult run_single(const MicrogridCase& microgrid, Objective objective, const RunOptions& options);

// Minimises the scalarised objective for the given bounds.
ScenarioResult run_scalarized(const MicrogridCase& microgrid, const ScalarizationSetup& setup,
                              const RunOptions& options, bool with_dr = false);

struct BoundsRun {
    ScalarizationSetup setup;
    ScenarioResult baseline;
    std::array<ScenarioResult, kObjectiveCount> singles;
};

// Scenario 0 for the maxima, scenarios 1-4 for the minima.
BoundsRun compute_bounds(const MicrogridCase& microgrid, const ObjectiveVector& weights, const RunOptions& options);

// Any scenario; scenario 5 runs the bound computation first.
ScenarioResult run_scenario(const MicrogridCase& microgrid, Scenario scenario, const ObjectiveVector& weights,
                            const RunOptions& options);

// Shared GA -> SQP -> commitment flips -> netting pipeline.
ScenarioResult optimize(const DispatchProblem& problem, const RunOptions& options, std::uint64_t seed);

} // namespace mgd
