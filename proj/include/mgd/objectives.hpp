#pragma once

#include <array>
#include <string>
#include <vector>

#include "mgd/devices.hpp"
#include "mgd/netmodel.hpp"
#include "mgd/powerflow.hpp"

namespace mgd {

enum class Objective { Cost = 0, Loss = 1, Reliability = 2, Voltage = 3 };

inline constexpr std::size_t kObjectiveCount = 4;

using ObjectiveVector = std::array<double, kObjectiveCount>;

const char* to_string(Objective objective);

struct ObjectiveBounds {
    double min = 0.0;
    double max = 1.0;
    bool degenerate() const { return !(max > min); }
};

using BoundsVector = std::array<ObjectiveBounds, kObjectiveCount>;

struct ObjectiveBundle {
    double f1_cost = 0.0;  // EUR ct
    double f2_loss = 0.0;  // kW summed over periods
    double f3_ens = 0.0;   // EUR ct
    double f4_vdev = 0.0;  // pu summed over periods and load buses
    BoundsVector bounds{};
    ObjectiveVector weights{};
    double scalar = 0.0;

    ObjectiveVector raw() const { return {f1_cost, f2_loss, f3_ens, f4_vdev}; }
    double value(Objective objective) const { return raw()[static_cast<std::size_t>(objective)]; }
};

// Operating cost: DG offers, grid energy (export credited at the same price
// unless export is disabled), battery throughput wear and optional DR
// incentive payments.
double eval_f1(const MicrogridCase& microgrid, const DispatchSchedule& schedule, const PowerFlowSolution& pf);

// Total network loss summed over periods.
double eval_f2(const PowerFlowSolution& pf);

// Sum of |v_ref - |V|| over periods and buses hosting a load point.
double eval_f4(const MicrogridCase& microgrid, const PowerFlowSolution& pf, double v_ref = 1.0);

// Weighted sum of normalised objectives, each term clamped to [0, 1].
// Degenerate bounds contribute 0.
double normalize_and_scalarize(const ObjectiveVector& raw, const BoundsVector& bounds, const ObjectiveVector& weights);

// Warns once per degenerate objective; returns how many were degenerate.
std::size_t warn_degenerate_bounds(const BoundsVector& bounds);

struct ScheduleEvaluation {
    PowerFlowSolution pf;
    std::vector<double> soc;
    ObjectiveBundle bundle; // raw values only; bounds/weights left default
};

// Full evaluation through the public path: power flow, SOC, F1-F4.
ScheduleEvaluation evaluate_schedule(const MicrogridCase& microgrid, const DispatchSchedule& schedule,
                                     const SweepOptions& options = {});

} // namespace mgd
