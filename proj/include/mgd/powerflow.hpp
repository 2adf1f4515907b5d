#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "mgd/devices.hpp"
#include "mgd/netmodel.hpp"

namespace mgd {

using Complex = std::complex<double>;

struct SweepOptions {
    double tolerance = 1e-10;   // max |dV| between sweeps, pu
    int max_iterations = 100;
    double collapse_floor = 0.5; // pu
    Complex slack_voltage{1.0, 0.0};
};

struct HourSolution {
    std::vector<Complex> voltages;        // per bus, pu
    std::vector<Complex> branch_currents; // per branch, pu, positive away from the slack
    Complex slack_power;                  // pu injected by the grid
    double loss_kw = 0.0;                 // sum |I|^2 R
    double balance_loss_kw = 0.0;         // slack injection + net bus injections
    double slack_kw = 0.0;
    int iterations = 0;
    double mismatch = 0.0; // last max |dV|
};

struct PowerFlowSolution {
    std::vector<HourSolution> hours;
    std::vector<GridViolation> grid_violations; // physics is solved regardless; feasibility is flagged

    double total_loss_kw() const;
    std::vector<double> slack_series() const;
    std::vector<double> loss_series() const;
};

// Net complex injection per bus in per unit (generation positive) for one
// period: loads at their power factor, DGs at unity, battery charge-positive,
// demand-response shift spread over the participating load points.
std::vector<Complex> bus_injections(const MicrogridCase& microgrid, const DispatchSchedule& schedule, std::size_t hour);

// Backward-forward sweep for one period. Throws ConvergenceError when the
// sweep does not settle within max_iterations and VoltageCollapseError when a
// bus voltage drops under the floor.
HourSolution solve_hour(const MicrogridCase& microgrid, std::span<const Complex> injections,
                        const SweepOptions& options = {});

// Independent hourly solves over the horizon. Hourly failures are rethrown
// with the period index.
PowerFlowSolution solve_horizon(const MicrogridCase& microgrid, const DispatchSchedule& schedule,
                                const SweepOptions& options = {});

void write_hourly_csv(std::ostream& out, const PowerFlowSolution& solution);
void write_voltage_csv(std::ostream& out, const MicrogridCase& microgrid, const PowerFlowSolution& solution);
void write_current_csv(std::ostream& out, const MicrogridCase& microgrid, const PowerFlowSolution& solution);

} // namespace mgd
