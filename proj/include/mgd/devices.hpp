#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mgd {

enum class UnitKind { PV, WT, MT, FC };

const char* to_string(UnitKind kind);
UnitKind unit_kind_from_string(const std::string& text);

// Distributed generator with an affine offer curve: cost = slope * p + fixed
// while committed.
struct DgUnit {
    std::string name;
    UnitKind kind = UnitKind::MT;
    std::string bus;
    double p_min = 0.0;      // kW
    double p_max = 0.0;      // kW
    double cost_slope = 0.0; // EUR ct/kWh
    double cost_fixed = 0.0; // EUR ct/h
    bool dispatchable = true;

    // Units with a positive minimum output are either off or in [p_min, p_max].
    bool committable() const { return dispatchable && p_min > 0.0; }

    bool operator==(const DgUnit&) const = default;
};

struct Battery {
    std::string bus;
    double soc_min = 0.0;        // kWh
    double soc_max = 0.0;        // kWh
    double p_max = 0.0;          // kW
    double eta_charge = 0.9;
    double eta_discharge = 0.9;
    double self_discharge = 0.002; // fraction per hour
    double soc_initial = 0.0;    // kWh
    double usage_cost = 0.38;    // EUR ct/kWh of throughput

    bool operator==(const Battery&) const = default;
};

// Decision schedule over the horizon. Battery power is charge-positive:
// P_B > 0 draws from the network, P_B < 0 feeds it.
struct DispatchSchedule {
    Eigen::MatrixXd dg_setpoints;   // [unit x hour], kW
    Eigen::VectorXd battery_power;  // [hour], kW
    Eigen::VectorXd dr_shift;       // [hour], kW; empty when demand response is off

    static DispatchSchedule zeros(std::size_t units, std::size_t horizon, bool with_dr = false);
    std::size_t horizon() const { return static_cast<std::size_t>(battery_power.size()); }
    bool has_dr() const { return dr_shift.size() > 0; }
};

// Offer-curve cost of one unit for one hour. A committable unit at p = 0 that
// is not committed costs nothing; otherwise p must lie in the unit's range.
double dg_cost(const DgUnit& unit, double p, bool committed);

// Same as dg_cost with the commitment status implied by the setpoint
// (p > 0 means on).
double dg_cost(const DgUnit& unit, double p);

// SOC at the end of every period, starting from battery.soc_initial.
std::vector<double> soc_trajectory(const Battery& battery, std::span<const double> power, double dt);

enum class BatteryBound { SocMin, SocMax, Power };

const char* to_string(BatteryBound bound);

struct BatteryViolation {
    std::size_t hour;
    BatteryBound bound;
    double magnitude; // kWh for SOC bounds, kW for the power bound
};

std::vector<BatteryViolation> battery_feasibility(const Battery& battery, std::span<const double> power,
                                                  double dt = 1.0, double tolerance = 0.0);

enum class GridBound { Import, Export };

struct GridViolation {
    std::size_t hour;
    GridBound bound;
    double magnitude; // kW beyond the limit
};

// Import is capped at `limit`. Export (negative slack) is capped at
// `export_limit`; the default equals the import limit.
std::vector<GridViolation> grid_feasibility(double limit, std::span<const double> slack_series,
                                            double export_limit = -1.0, double tolerance = 0.0);

} // namespace mgd
