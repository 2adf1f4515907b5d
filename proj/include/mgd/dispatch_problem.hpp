#pragma once

#include <vector>

#include <Eigen/Core>

#include "mgd/devices.hpp"
#include "mgd/ga.hpp"
#include "mgd/netmodel.hpp"
#include "mgd/objectives.hpp"
#include "mgd/sqp.hpp"

namespace mgd {

// What a scenario minimises.
struct ObjectiveSpec {
    enum class Mode { Single, Scalarized };

    Mode mode = Mode::Single;
    Objective objective = Objective::Cost; // Single
    double scale = 1.0;                    // Single: divisor, usually the baseline value
    BoundsVector bounds{};                 // Scalarized
    ObjectiveVector weights{};             // Scalarized
    // Scalarized: keep every objective at or below its upper bound.
    bool cap_at_max = true;

    static ObjectiveSpec single(Objective objective, double scale);
    static ObjectiveSpec scalarized(const BoundsVector& bounds, const ObjectiveVector& weights);

    // Smooth value used inside the optimizer (normalised terms are not
    // clamped here).
    double internal(const ObjectiveVector& raw) const;
    // Reported value: the raw objective, or the clamped scalarisation.
    double official(const ObjectiveVector& raw) const;
};

// Per committable unit and period: true when the unit is on.
using Commitment = std::vector<std::vector<bool>>;

// The dispatch NLP in two encodings.
//
// Compact (GA, reports): [unit setpoints u*T + t][battery net power T][shift T]
//   with battery power charge-positive; the shift block exists only with DR.
// Split (SQP): [unit setpoints][charge T][discharge T][shift T]
//   so the SOC recursion is linear.
class DispatchProblem {
public:
    DispatchProblem(const MicrogridCase& microgrid, ObjectiveSpec spec, bool with_dr);

    const MicrogridCase& microgrid() const { return mg_; }
    const ObjectiveSpec& spec() const { return spec_; }
    bool with_dr() const { return with_dr_; }
    Eigen::Index compact_size() const;
    Eigen::Index split_size() const;

    Eigen::VectorXd compact_lower() const { return lower_; }
    Eigen::VectorXd compact_upper() const { return upper_; }

    // Commitment thresholding (below p_min/2 off, else at least p_min), SOC
    // clipping along the trajectory and an energy-neutral shift.
    Eigen::VectorXd repair(const Eigen::VectorXd& compact) const;

    DispatchSchedule to_schedule(const Eigen::VectorXd& compact) const;
    Eigen::VectorXd to_compact(const DispatchSchedule& schedule) const;
    Eigen::VectorXd split_from_compact(const Eigen::VectorXd& compact) const;
    Eigen::VectorXd compact_from_split(const Eigen::VectorXd& split) const;

    Commitment commitment(const Eigen::VectorXd& compact) const;
    void split_bounds(const Commitment& commitment, Eigen::VectorXd& lower, Eigen::VectorXd& upper) const;

    // Objective plus normalised constraints (h = 0, g <= 0) of a split point.
    NlpPoint evaluate_split(const Eigen::VectorXd& split) const;
    GaEvaluation evaluate_compact(const Eigen::VectorXd& compact) const;

    GaProblem ga_problem() const;
    Nlp nlp(const Commitment& commitment) const;

    struct Assessment {
        ScheduleEvaluation evaluation;
        double objective = 0.0; // spec.official
        double violation = 0.0; // normalised max-norm
        bool feasible = false;
    };
    // Evaluation through the public path (SOC from the net battery power)
    // and a feasibility check against every device and network limit.
    Assessment assess(const DispatchSchedule& schedule, double tolerance = 1e-6) const;

    // Weight of the simultaneous charge/discharge regulariser, per kW^2
    // normalised by the battery rating.
    static constexpr double kComplementarityWeight = 1e-4;

private:
    const MicrogridCase& mg_;
    ObjectiveSpec spec_;
    bool with_dr_;
    Eigen::Index units_, horizon_;
    Eigen::VectorXd lower_, upper_;
    std::vector<double> shift_limit_;
    double shift_base_ = 1.0;

    Eigen::Index battery_offset() const { return units_ * horizon_; }
    void append_limits(const PowerFlowSolution& pf, std::span<const double> soc,
                       const ObjectiveVector& raw, std::vector<double>& ineq) const;
};

} // namespace mgd
