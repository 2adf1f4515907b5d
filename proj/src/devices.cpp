#include "mgd/devices.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mgd/errors.hpp"

namespace mgd {

const char* to_string(UnitKind kind)
{
    switch (kind) {
    case UnitKind::PV: return "PV";
    case UnitKind::WT: return "WT";
    case UnitKind::MT: return "MT";
    case UnitKind::FC: return "FC";
    }
    return "?";
}

UnitKind unit_kind_from_string(const std::string& text)
{
    if (text == "PV") return UnitKind::PV;
    if (text == "WT") return UnitKind::WT;
    if (text == "MT") return UnitKind::MT;
    if (text == "FC") return UnitKind::FC;
    throw ParseError("unknown unit kind '" + text + "'");
}

const char* to_string(BatteryBound bound)
{
    switch (bound) {
    case BatteryBound::SocMin: return "soc_min";
    case BatteryBound::SocMax: return "soc_max";
    case BatteryBound::Power: return "power";
    }
    return "?";
}

DispatchSchedule DispatchSchedule::zeros(std::size_t units, std::size_t horizon, bool with_dr)
{
    DispatchSchedule s;
    s.dg_setpoints = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(units), static_cast<Eigen::Index>(horizon));
    s.battery_power = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(horizon));
    if (with_dr)
        s.dr_shift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(horizon));
    return s;
}

double dg_cost(const DgUnit& unit, double p, bool committed)
{
    if (!std::isfinite(p) || p < 0.0 || p > unit.p_max) {
        std::ostringstream msg;
        msg << "unit '" << unit.name << "': output " << p << " kW outside [0, " << unit.p_max << "]";
        throw ValidationError(msg.str());
    }
    if (!committed) {
        if (p != 0.0)
            throw ValidationError("unit '" + unit.name + "': decommitted unit with nonzero output");
        return 0.0;
    }
    if (p < unit.p_min) {
        std::ostringstream msg;
        msg << "unit '" << unit.name << "': committed output " << p << " kW below p_min " << unit.p_min;
        throw ValidationError(msg.str());
    }
    return unit.cost_slope * p + unit.cost_fixed;
}

double dg_cost(const DgUnit& unit, double p)
{
    return dg_cost(unit, p, p > 0.0);
}

std::vector<double> soc_trajectory(const Battery& battery, std::span<const double> power, double dt)
{
    std::vector<double> soc(power.size());
    double level = battery.soc_initial;
    for (std::size_t t = 0; t < power.size(); ++t) {
        const double p = power[t];
        level = level * (1.0 - battery.self_discharge) + battery.eta_charge * std::max(0.0, p) * dt +
                std::min(0.0, p) * dt / battery.eta_discharge;
        soc[t] = level;
    }
    return soc;
}

std::vector<BatteryViolation> battery_feasibility(const Battery& battery, std::span<const double> power,
                                                  double dt, double tolerance)
{
    std::vector<BatteryViolation> violations;
    const auto soc = soc_trajectory(battery, power, dt);
    for (std::size_t t = 0; t < power.size(); ++t) {
        const double excess = std::abs(power[t]) - battery.p_max;
        if (excess > tolerance)
            violations.push_back({t, BatteryBound::Power, excess});
        if (battery.soc_min - soc[t] > tolerance)
            violations.push_back({t, BatteryBound::SocMin, battery.soc_min - soc[t]});
        if (soc[t] - battery.soc_max > tolerance)
            violations.push_back({t, BatteryBound::SocMax, soc[t] - battery.soc_max});
    }
    return violations;
}

std::vector<GridViolation> grid_feasibility(double limit, std::span<const double> slack_series, double export_limit,
                                            double tolerance)
{
    if (export_limit < 0.0)
        export_limit = limit;
    std::vector<GridViolation> violations;
    for (std::size_t t = 0; t < slack_series.size(); ++t) {
        const double p = slack_series[t];
        if (p - limit > tolerance)
            violations.push_back({t, GridBound::Import, p - limit});
        else if (-p - export_limit > tolerance)
            violations.push_back({t, GridBound::Export, -p - export_limit});
    }
    return violations;
}

} // namespace mgd
