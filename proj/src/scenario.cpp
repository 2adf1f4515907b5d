#include "mgd/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "mgd/ahp.hpp"
#include "mgd/errors.hpp"
#include "mgd/log.hpp"
#include "mgd/parallel.hpp"

namespace mgd {

using Eigen::Index;
using Eigen::VectorXd;

Scenario scenario_from_int(int id)
{
    if (id < 0 || id > 5)
        throw ValidationError("scenario must be in 0..5, got " + std::to_string(id));
    return static_cast<Scenario>(id);
}

std::string scenario_label(Scenario scenario, bool with_dr)
{
    switch (scenario) {
    case Scenario::Initial: return "Initial state";
    case Scenario::Cost: return "First scenario";
    case Scenario::Loss: return "Second scenario";
    case Scenario::Reliability: return "Third scenario";
    case Scenario::Voltage: return "Fourth scenario";
    case Scenario::Combined: return with_dr ? "Fifth scenario with DR" : "Fifth scenario without DR";
    }
    return "?";
}

std::uint64_t scenario_seed(std::uint64_t seed, Scenario scenario, bool with_dr)
{
    return split_seed(seed, static_cast<std::uint64_t>(scenario) + (with_dr ? 16 : 0));
}

ObjectiveVector default_weights(const MicrogridCase& mg)
{
    VectorXd w;
    if (mg.direct_weights) {
        w = Eigen::Map<const VectorXd>(mg.direct_weights->data(), static_cast<Index>(mg.direct_weights->size()));
    } else if (mg.judgment_matrix) {
        w = derive_weights(ComparisonMatrix::from_rows(*mg.judgment_matrix)).weights;
    } else {
        w = derive_weights(default_judgment_matrix()).weights;
    }
    if (w.size() != static_cast<Index>(kObjectiveCount))
        throw ValidationError("scenario weights need exactly four entries");
    ObjectiveVector out{};
    const double sum = w.sum();
    for (std::size_t k = 0; k < kObjectiveCount; ++k)
        out[k] = w[static_cast<Index>(k)] / sum;
    return out;
}

ScenarioResult run_baseline(const MicrogridCase& mg)
{
    ScenarioResult r;
    r.scenario = Scenario::Initial;
    r.schedule = DispatchSchedule::zeros(mg.units.size(), mg.horizon);
    const DispatchProblem problem(mg, ObjectiveSpec::single(Objective::Cost, 1.0), false);
    const auto a = problem.assess(r.schedule);
    r.bundle = a.evaluation.bundle;
    r.objective = 0.0;
    r.feasible = a.feasible;
    r.violation = a.violation;
    if (!a.feasible)
        log_warning("the grid-only schedule violates network limits (normalised violation " +
                    std::to_string(a.violation) + ")");
    return r;
}

namespace {

std::vector<VectorXd> heuristic_seeds(const DispatchProblem& problem)
{
    const MicrogridCase& mg = problem.microgrid();
    const Index T = static_cast<Index>(mg.horizon);
    const Index U = static_cast<Index>(mg.units.size());
    const VectorXd upper = problem.compact_upper();
    std::vector<VectorXd> seeds;
    for (int units = 0; units < 4; ++units) {
        for (int battery = 0; battery < 3; ++battery) {
            VectorXd x = VectorXd::Zero(problem.compact_size());
            for (Index u = 0; u < U; ++u) {
                const bool renewable = !mg.units[static_cast<std::size_t>(u)].dispatchable;
                if ((units & 1 && renewable) || (units & 2 && !renewable))
                    x.segment(u * T, T) = upper.segment(u * T, T);
            }
            if (mg.battery && battery > 0)
                x.segment(U * T, T).setConstant(battery == 1 ? mg.battery->p_max : -mg.battery->p_max);
            seeds.push_back(x);
        }
    }
    return seeds;
}

void append_sqp_trace(std::vector<TraceRow>& trace, const std::string& phase, const SqpResult& res)
{
    for (const auto& row : res.trace)
        trace.push_back({phase, row.iteration, row.objective, row.merit, row.kkt_residual, row.violation,
                         row.step_norm, row.alpha, to_string(row.qp_status)});
}

// Greedy on/off flips of committable units at fixed other variables; keeps a
// flip only if the point stays feasible and the objective drops.
int commitment_pass(const DispatchProblem& problem, VectorXd& z, NlpPoint& point, Commitment& on, double tol,
                    std::size_t& evaluations)
{
    const MicrogridCase& mg = problem.microgrid();
    const Index T = static_cast<Index>(mg.horizon);
    int flips = 0;
    for (std::size_t u = 0; u < mg.units.size(); ++u) {
        const DgUnit& unit = mg.units[u];
        if (!unit.committable())
            continue;
        for (Index t = 0; t < T; ++t) {
            const Index i = static_cast<Index>(u) * T + t;
            std::vector<double> candidates;
            if (on[u][static_cast<std::size_t>(t)])
                candidates = {0.0};
            else
                candidates = {unit.p_min, 0.5 * (unit.p_min + unit.p_max), unit.p_max};
            double best_value = point.objective;
            std::optional<std::pair<double, NlpPoint>> best;
            for (double v : candidates) {
                VectorXd trial = z;
                trial[i] = v;
                NlpPoint p;
                try {
                    p = problem.evaluate_split(trial);
                } catch (const ConvergenceError&) {
                    continue;
                }
                ++evaluations;
                if (constraint_violation(p) <= tol &&
                    p.objective < best_value - 1e-12 * std::max(1.0, std::abs(best_value))) {
                    best_value = p.objective;
                    best = std::make_pair(v, p);
                }
            }
            if (best) {
                z[i] = best->first;
                point = best->second;
                on[u][static_cast<std::size_t>(t)] = best->first > 0.0;
                ++flips;
            }
        }
    }
    return flips;
}

} // namespace

ScenarioResult optimize(const DispatchProblem& problem, const RunOptions& options, std::uint64_t seed)
{
    const std::size_t threads = options.threads > 0 ? options.threads : default_thread_count();
    ScenarioResult result;
    result.seed = seed;
    result.with_dr = problem.with_dr();
    ScenarioDiagnostics& diag = result.diagnostics;

    // Seeds: grid-only schedule, warm starts, simple corner heuristics.
    std::vector<VectorXd> seeds;
    seeds.push_back(VectorXd::Zero(problem.compact_size()));
    std::vector<VectorXd> warm;
    for (const auto& s : options.warm_starts) {
        DispatchSchedule padded = s;
        if (problem.with_dr() && !padded.has_dr())
            padded.dr_shift = VectorXd::Zero(static_cast<Index>(padded.horizon()));
        if (!problem.with_dr())
            padded.dr_shift = VectorXd(0);
        warm.push_back(problem.to_compact(padded));
        seeds.push_back(warm.back());
    }
    for (auto& h : heuristic_seeds(problem))
        seeds.push_back(std::move(h));

    GaConfig ga = options.ga;
    ga.seed = seed;
    ga.threads = threads;
    ga.feasibility_tolerance = options.sqp.tol_feas;
    const GaResult seeded = ga_seed(problem.ga_problem(), ga, seeds);
    diag.evaluations += seeded.evaluations;
    for (std::size_t g = 0; g < seeded.history.size(); ++g)
        result.trace.push_back({"ga", static_cast<int>(g), seeded.history[g].objective, 0.0, 0.0,
                                seeded.history[g].violation, 0.0, 0.0, ""});

    const DispatchSchedule seed_schedule = problem.to_schedule(seeded.best);
    const auto seed_assessment = problem.assess(seed_schedule, options.sqp.tol_feas);
    diag.seed_objective = seed_assessment.objective;
    diag.seed_feasible = seed_assessment.feasible;

    // Refinement with the commitment fixed, then greedy flips and re-solves.
    SqpOptions sqp = options.sqp;
    sqp.threads = threads;
    Commitment on = problem.commitment(seeded.best);
    VectorXd z = problem.split_from_compact(seeded.best);
    SqpResult refined = sqp_solve(problem.nlp(on), z, sqp);
    append_sqp_trace(result.trace, "sqp", refined);
    diag.sqp_iterations += refined.iterations;
    diag.evaluations += static_cast<std::size_t>(refined.evaluations);
    diag.used_elastic = refined.used_elastic;
    for (int pass = 0; pass < options.flip_passes && refined.feasible; ++pass) {
        VectorXd zc = refined.x;
        NlpPoint pc = refined.point;
        const int flips = commitment_pass(problem, zc, pc, on, sqp.tol_feas, diag.evaluations);
        if (flips == 0)
            break;
        diag.commitment_flips += flips;
        SqpResult again = sqp_solve(problem.nlp(on), zc, sqp);
        append_sqp_trace(result.trace, "sqp_flip" + std::to_string(pass + 1), again);
        diag.sqp_iterations += again.iterations;
        diag.evaluations += static_cast<std::size_t>(again.evaluations);
        diag.used_elastic = diag.used_elastic || again.used_elastic;
        if (again.feasible && again.point.objective <= pc.objective)
            refined = std::move(again);
        else {
            refined.x = zc;
            refined.point = pc;
        }
    }
    diag.sqp_status = refined.status;
    diag.kkt_residual = refined.state.kkt_residual;

    const VectorXd netted = problem.repair(problem.compact_from_split(refined.x));
    const DispatchSchedule sqp_schedule = problem.to_schedule(netted);
    const auto sqp_assessment = problem.assess(sqp_schedule, options.sqp.tol_feas);
    diag.sqp_objective = sqp_assessment.objective;
    diag.sqp_feasible = sqp_assessment.feasible;

    // Best feasible candidate; the refined schedule wins ties.
    struct Candidate {
        const char* name;
        DispatchSchedule schedule;
        DispatchProblem::Assessment assessment;
    };
    std::vector<Candidate> candidates;
    candidates.push_back({"sqp", sqp_schedule, sqp_assessment});
    candidates.push_back({"ga_seed", seed_schedule, seed_assessment});
    for (const auto& w : warm) {
        const DispatchSchedule s = problem.to_schedule(w);
        candidates.push_back({"warm_start", s, problem.assess(s, options.sqp.tol_feas)});
    }
    std::size_t pick = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        const auto& a = candidates[c].assessment;
        const auto& b = candidates[pick].assessment;
        if (a.feasible != b.feasible ? a.feasible
                                     : (a.feasible ? a.objective < b.objective : a.violation < b.violation))
            pick = c;
    }
    const Candidate& chosen = candidates[pick];
    diag.selected = chosen.name;
    result.schedule = chosen.schedule;
    result.bundle = chosen.assessment.evaluation.bundle;
    result.objective = chosen.assessment.objective;
    result.feasible = chosen.assessment.feasible;
    result.violation = chosen.assessment.violation;
    if (!result.feasible)
        log_warning("no feasible schedule found; reporting the least infeasible one (violation " +
                    std::to_string(result.violation) + ")");
    return result;
}

ScenarioResult run_single(const MicrogridCase& mg, Objective objective, const RunOptions& options)
{
    const ScenarioResult baseline = run_baseline(mg);
    const double scale = baseline.bundle.value(objective);
    const DispatchProblem problem(mg, ObjectiveSpec::single(objective, scale), false);
    const Scenario scenario = static_cast<Scenario>(static_cast<int>(objective) + 1);
    ScenarioResult r = optimize(problem, options, scenario_seed(options.seed, scenario, false));
    r.scenario = scenario;
    return r;
}

ScenarioResult run_scalarized(const MicrogridCase& mg, const ScalarizationSetup& setup, const RunOptions& options,
                              bool with_dr)
{
    warn_degenerate_bounds(setup.bounds);
    const DispatchProblem problem(mg, ObjectiveSpec::scalarized(setup.bounds, setup.weights), with_dr);
    ScenarioResult r = optimize(problem, options, scenario_seed(options.seed, Scenario::Combined, with_dr));
    r.scenario = Scenario::Combined;
    r.bundle.bounds = setup.bounds;
    r.bundle.weights = setup.weights;
    r.bundle.scalar = r.objective;
    return r;
}

BoundsRun compute_bounds(const MicrogridCase& mg, const ObjectiveVector& weights, const RunOptions& options)
{
    BoundsRun run;
    run.baseline = run_baseline(mg);
    run.setup.weights = weights;
    for (std::size_t k = 0; k < kObjectiveCount; ++k) {
        run.singles[k] = run_single(mg, static_cast<Objective>(k), options);
        run.setup.bounds[k] = {run.singles[k].bundle.value(static_cast<Objective>(k)),
                               run.baseline.bundle.value(static_cast<Objective>(k))};
    }
    return run;
}

ScenarioResult run_scenario(const MicrogridCase& mg, Scenario scenario, const ObjectiveVector& weights,
                            const RunOptions& options)
{
    try {
        switch (scenario) {
        case Scenario::Initial: return run_baseline(mg);
        case Scenario::Combined: return run_scalarized(mg, compute_bounds(mg, weights, options).setup, options);
        default: return run_single(mg, static_cast<Objective>(static_cast<int>(scenario) - 1), options);
        }
    } catch (const ConvergenceError& e) {
        throw ConvergenceError("scenario " + std::to_string(static_cast<int>(scenario)) + ": " + e.what());
    }
}

} // namespace mgd
