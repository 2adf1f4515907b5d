#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mgd/devices.hpp"
#include "mgd/netmodel.hpp"

namespace mgd {

// Buses disconnected from the slack once `element` is removed. The
// transformer contingency islands every bus.
std::vector<bool> island_partition(const MicrogridCase& microgrid, const std::string& element);

struct Restoration {
    double s_out = 0.0; // islanded load
    double s_rdg = 0.0; // restored by in-island DGs
    double s_rst = 0.0; // restored by an in-island battery
    double shortfall() const { return std::max(0.0, s_out - s_rdg - s_rst); }
};

// Min-cascade screening of one island in one period: DG capability first,
// then the battery limited by its power rating and by the energy above
// soc_min spread over the repair time.
Restoration restoration(const MicrogridCase& microgrid, std::size_t hour, const std::vector<bool>& islanded,
                        std::span<const double> bus_load_kw, double soc, double repair_time);

// Convenience overload deriving bus loads and SOC from a schedule.
Restoration restoration(const MicrogridCase& microgrid, const DispatchSchedule& schedule, std::size_t hour,
                        const std::vector<bool>& islanded, double repair_time);

// Load per load point and period after any demand-response shift.
std::vector<LoadPoint> effective_loads(const MicrogridCase& microgrid, const DispatchSchedule& schedule);

// SOC trajectory of the schedule's battery; empty without a battery.
std::vector<double> schedule_soc(const MicrogridCase& microgrid, const DispatchSchedule& schedule);

struct ContingencyRecord {
    std::size_t contingency;
    std::size_t hour;
    Restoration restored;
    double cost; // EUR ct
};

std::vector<ContingencyRecord> contingency_report(const MicrogridCase& microgrid, const DispatchSchedule& schedule,
                                                  std::span<const double> soc);

// Expected cost of unsupplied energy in EUR ct. The shortfall of each island
// is priced per load category in proportion to the islanded demand.
double unsupplied_energy_cost(const MicrogridCase& microgrid, const DispatchSchedule& schedule,
                              std::span<const double> soc);

void write_contingency_csv(std::ostream& out, const MicrogridCase& microgrid,
                           const std::vector<ContingencyRecord>& records);

} // namespace mgd
