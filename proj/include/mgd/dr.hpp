#pragma once

#include <span>
#include <vector>

#include "mgd/netmodel.hpp"
#include "mgd/scenario.hpp"

namespace mgd {

// Load profiles after adding `shift` (kW per period), split over the
// participating load points in proportion to their demand in that period.
// No neutrality check; used inside the optimizer where iterates may be
// slightly off the equality constraint.
std::vector<LoadPoint> distribute_shift(const MicrogridCase& microgrid, std::span<const double> shift);

// Participating demand per period, the base of the shift bounds.
std::vector<double> participating_demand(const MicrogridCase& microgrid);

// Checked shift: requires an energy-neutral shift inside the per-period
// bounds and non-negative resulting profiles.
std::vector<LoadPoint> apply_shift(const MicrogridCase& microgrid, std::span<const double> shift,
                                   double tolerance = 1e-9);

// Scenario-5 optimisation with the shift vector as extra decision variables.
// `without_dr` is the no-DR scenario-5 result; it is used as a warm start
// (with zero shift it stays feasible).
ScenarioResult optimize_with_dr(const MicrogridCase& microgrid, const ScalarizationSetup& setup,
                                const ScenarioResult& without_dr, const RunOptions& options);

} // namespace mgd
