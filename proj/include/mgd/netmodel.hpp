#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgd/contingency.hpp"
#include "mgd/devices.hpp"
#include "mgd/dr_program.hpp"

namespace mgd {

inline constexpr int kCaseFormatVersion = 1;
inline constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

enum class BusKind { Slack, Load, Generation };

const char* to_string(BusKind kind);
BusKind bus_kind_from_string(const std::string& text);

struct Bus {
    std::string id;
    BusKind kind = BusKind::Load;
    double base_voltage = 0.4; // kV
    bool operator==(const Bus&) const = default;
};

struct Branch {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    double resistance = 0.0; // ohm
    double reactance = 0.0;  // ohm
    bool operator==(const Branch&) const = default;
};

struct LoadPoint {
    std::string bus;
    LoadCategory category = LoadCategory::Domestic;
    std::vector<double> profile; // kW per period
    double power_factor = 0.9;   // lagging
    bool operator==(const LoadPoint&) const = default;
};

struct PriceSeries {
    std::vector<double> grid_price; // EUR ct/kWh
    bool operator==(const PriceSeries&) const = default;
};

struct VoltageLimits {
    double v_min = 0.95; // pu
    double v_max = 1.05; // pu
    bool operator==(const VoltageLimits&) const = default;
};

struct PerUnitBase {
    double voltage = 0.4; // kV
    double power = 100.0; // kVA
    double impedance() const { return voltage * voltage * 1000.0 / power; } // ohm
    bool operator==(const PerUnitBase&) const = default;
};

// Radial structure of the network with every branch oriented away from the
// slack bus.
struct RadialNetwork {
    std::size_t slack = kNoIndex;
    std::vector<std::size_t> order;         // branch indices, leaves first
    std::vector<std::size_t> upstream_bus;  // per branch
    std::vector<std::size_t> downstream_bus; // per branch
    std::vector<std::size_t> parent_branch; // per bus, kNoIndex for the slack
    bool operator==(const RadialNetwork&) const = default;
};

// Orders branches so every branch is preceded by all branches of its
// downstream subtree. Throws ValidationError on cycles, disconnected buses,
// unknown bus references, or a missing/duplicated slack bus.
RadialNetwork validate_radial(const std::vector<Bus>& buses, const std::vector<Branch>& branches);

struct MicrogridCase {
    std::string name;
    PerUnitBase base;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<LoadPoint> load_points;
    std::vector<DgUnit> units;
    std::optional<Battery> battery;
    double grid_limit = 300.0;        // kW import
    double export_limit = 300.0;      // kW export
    bool allow_export = true;
    PriceSeries prices;
    std::map<std::string, std::vector<double>> renewable_availability; // unit name -> kW per period
    std::vector<Contingency> contingencies;
    OutageCostTable outage_costs;
    VoltageLimits voltage_limits;
    std::size_t horizon = 24;
    double period_length = 1.0; // hours
    std::optional<DrProgram> demand_response;
    std::optional<std::vector<std::vector<double>>> judgment_matrix;
    std::optional<std::vector<double>> direct_weights;

    // Derived by validate_case.
    RadialNetwork network;
    std::vector<std::size_t> load_bus;  // per load point
    std::vector<std::size_t> unit_bus;  // per unit
    std::size_t battery_bus = kNoIndex;

    std::size_t bus_index(const std::string& id) const;
    std::size_t branch_index(const std::string& id) const;
    std::size_t unit_index(const std::string& name) const;

    // Upper output bound of a unit in one period: the availability curve for
    // non-dispatchable units, p_max otherwise.
    double unit_cap(std::size_t unit, std::size_t hour) const;

    // Aggregate demand of all load points in one period, kW.
    double total_demand(std::size_t hour) const;

    bool operator==(const MicrogridCase&) const = default;
};

// Checks every invariant of the case and fills the derived fields (radial
// ordering, contingency islands). Throws ValidationError naming the offending
// element.
void validate_case(MicrogridCase& microgrid);

MicrogridCase load_case(const std::filesystem::path& path);
MicrogridCase parse_case(const std::string& text);
std::string serialize_case(const MicrogridCase& microgrid);
void save_case(const MicrogridCase& microgrid, const std::filesystem::path& path);

// Shipped synthetic benchmark case.
std::filesystem::path benchmark_case_path();

} // namespace mgd
