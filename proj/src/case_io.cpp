#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "mgd/errors.hpp"
#include "mgd/netmodel.hpp"

namespace mgd {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& where)
{
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

template <typename T>
T get(const json& j, const char* key, const std::string& where)
{
    try {
        return field(j, key, where).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(where + ": field '" + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where)
{
    if (!j.contains(key))
        return fallback;
    return get<T>(j, key, where);
}

std::vector<double> hourly(const json& j, const char* key, const std::string& where, std::size_t horizon)
{
    const json& value = field(j, key, where);
    if (value.is_number())
        return std::vector<double>(horizon, value.get<double>());
    return get<std::vector<double>>(j, key, where);
}

json outage_steps_to_json(const std::vector<OutageCostTable::Step>& steps)
{
    json out = json::array();
    for (const auto& s : steps) {
        json step;
        step["max_duration_h"] = std::isinf(s.max_duration) ? json(nullptr) : json(s.max_duration);
        step["cost"] = s.cost;
        out.push_back(step);
    }
    return out;
}

std::vector<OutageCostTable::Step> outage_steps_from_json(const json& j, const std::string& where)
{
    std::vector<OutageCostTable::Step> steps;
    if (j.is_number()) {
        steps.push_back({std::numeric_limits<double>::infinity(), j.get<double>()});
        return steps;
    }
    if (!j.is_array())
        throw ParseError(where + ": expected a number or an array of steps");
    for (const auto& s : j) {
        const json& d = field(s, "max_duration_h", where);
        steps.push_back({d.is_null() ? std::numeric_limits<double>::infinity() : d.get<double>(),
                         get<double>(s, "cost", where)});
    }
    return steps;
}

MicrogridCase from_json(const json& root)
{
    if (!root.is_object())
        throw ParseError("case: top level must be an object");
    const int version = get<int>(root, "format_version", "case");
    if (version != kCaseFormatVersion)
        throw ParseError("case: unsupported format_version " + std::to_string(version));

    MicrogridCase mg;
    mg.name = get_or<std::string>(root, "name", "", "case");
    mg.horizon = get_or<std::size_t>(root, "horizon", 24, "case");
    mg.period_length = get_or<double>(root, "period_length_h", 1.0, "case");
    if (root.contains("base")) {
        const json& base = root["base"];
        mg.base.voltage = get_or<double>(base, "voltage_kv", 0.4, "base");
        mg.base.power = get_or<double>(base, "power_kva", 100.0, "base");
    }
    const json& vl = field(root, "voltage_limits", "case");
    mg.voltage_limits = {get<double>(vl, "min", "voltage_limits"), get<double>(vl, "max", "voltage_limits")};

    const json& grid = field(root, "grid", "case");
    mg.grid_limit = get<double>(grid, "import_limit_kw", "grid");
    mg.export_limit = get_or<double>(grid, "export_limit_kw", mg.grid_limit, "grid");
    mg.allow_export = get_or<bool>(grid, "allow_export", true, "grid");

    mg.prices.grid_price = hourly(field(root, "prices", "case"), "grid_eur_ct_per_kwh", "prices", mg.horizon);

    for (const auto& b : field(root, "buses", "case")) {
        Bus bus;
        bus.id = get<std::string>(b, "id", "bus");
        bus.kind = bus_kind_from_string(get<std::string>(b, "kind", "bus '" + bus.id + "'"));
        bus.base_voltage = get_or<double>(b, "base_voltage_kv", mg.base.voltage, "bus '" + bus.id + "'");
        mg.buses.push_back(bus);
    }
    for (const auto& b : field(root, "branches", "case")) {
        Branch br;
        br.id = get<std::string>(b, "id", "branch");
        const std::string where = "branch '" + br.id + "'";
        br.from_bus = get<std::string>(b, "from", where);
        br.to_bus = get<std::string>(b, "to", where);
        br.resistance = get<double>(b, "r_ohm", where);
        br.reactance = get_or<double>(b, "x_ohm", 0.0, where);
        mg.branches.push_back(br);
    }
    for (const auto& l : field(root, "loads", "case")) {
        LoadPoint lp;
        lp.bus = get<std::string>(l, "bus", "load");
        const std::string where = "load at '" + lp.bus + "'";
        try {
            lp.category = load_category_from_string(get<std::string>(l, "category", where));
        } catch (const Error& e) {
            throw ParseError(where + ": " + e.what());
        }
        lp.profile = hourly(l, "profile_kw", where, mg.horizon);
        lp.power_factor = get_or<double>(l, "power_factor", 0.9, where);
        mg.load_points.push_back(std::move(lp));
    }
    for (const auto& u : get_or<json>(root, "units", json::array(), "case")) {
        DgUnit unit;
        unit.name = get<std::string>(u, "name", "unit");
        const std::string where = "unit '" + unit.name + "'";
        try {
            unit.kind = unit_kind_from_string(get<std::string>(u, "kind", where));
        } catch (const Error& e) {
            throw ParseError(where + ": " + e.what());
        }
        unit.bus = get<std::string>(u, "bus", where);
        unit.p_min = get_or<double>(u, "p_min_kw", 0.0, where);
        unit.p_max = get<double>(u, "p_max_kw", where);
        unit.cost_slope = get<double>(u, "cost_slope", where);
        unit.cost_fixed = get_or<double>(u, "cost_fixed", 0.0, where);
        const bool default_dispatchable = unit.kind == UnitKind::MT || unit.kind == UnitKind::FC;
        unit.dispatchable = get_or<bool>(u, "dispatchable", default_dispatchable, where);
        if (u.contains("availability_kw"))
            mg.renewable_availability[unit.name] = hourly(u, "availability_kw", where, mg.horizon);
        mg.units.push_back(unit);
    }
    if (root.contains("battery") && !root["battery"].is_null()) {
        const json& b = root["battery"];
        Battery bat;
        bat.bus = get<std::string>(b, "bus", "battery");
        bat.soc_min = get<double>(b, "soc_min_kwh", "battery");
        bat.soc_max = get<double>(b, "soc_max_kwh", "battery");
        bat.p_max = get<double>(b, "p_max_kw", "battery");
        bat.eta_charge = get_or<double>(b, "eta_charge", 0.9, "battery");
        bat.eta_discharge = get_or<double>(b, "eta_discharge", 0.9, "battery");
        bat.self_discharge = get_or<double>(b, "self_discharge_per_h", 0.002, "battery");
        bat.soc_initial = get<double>(b, "soc_initial_kwh", "battery");
        bat.usage_cost = get_or<double>(b, "usage_cost", 0.38, "battery");
        mg.battery = bat;
    }
    if (root.contains("reliability")) {
        const json& rel = root["reliability"];
        for (const auto& c : get_or<json>(rel, "contingencies", json::array(), "reliability")) {
            Contingency con;
            con.id = get<std::string>(c, "id", "contingency");
            const std::string where = "contingency '" + con.id + "'";
            con.failed_element = get<std::string>(c, "element", where);
            con.lambda = get<double>(c, "lambda_per_h", where);
            con.repair_time = get<double>(c, "repair_h", where);
            mg.contingencies.push_back(con);
        }
        if (rel.contains("outage_costs")) {
            const json& oc = rel["outage_costs"];
            for (std::size_t k = 0; k < kLoadCategoryCount; ++k) {
                const auto category = static_cast<LoadCategory>(k);
                if (oc.contains(to_string(category)))
                    mg.outage_costs.set_steps(category,
                                              outage_steps_from_json(oc[to_string(category)], "outage_costs"));
            }
        }
    }
    if (root.contains("demand_response") && !root["demand_response"].is_null()) {
        const json& d = root["demand_response"];
        DrProgram dr;
        dr.shiftable_fraction = hourly(d, "shiftable_fraction", "demand_response", mg.horizon);
        if (d.contains("participation")) {
            for (std::size_t k = 0; k < kLoadCategoryCount; ++k) {
                const char* key = to_string(static_cast<LoadCategory>(k));
                dr.participation[k] = get_or<bool>(d["participation"], key, false, "demand_response.participation");
            }
        }
        dr.shift_cost = get_or<double>(d, "shift_cost", 0.0, "demand_response");
        mg.demand_response = dr;
    }
    if (root.contains("weights")) {
        const json& w = root["weights"];
        if (w.contains("judgment_matrix"))
            mg.judgment_matrix = get<std::vector<std::vector<double>>>(w, "judgment_matrix", "weights");
        if (w.contains("direct"))
            mg.direct_weights = get<std::vector<double>>(w, "direct", "weights");
    }
    return mg;
}

json to_json(const MicrogridCase& mg)
{
    json root;
    root["format_version"] = kCaseFormatVersion;
    root["name"] = mg.name;
    root["horizon"] = mg.horizon;
    root["period_length_h"] = mg.period_length;
    root["base"] = {{"voltage_kv", mg.base.voltage}, {"power_kva", mg.base.power}};
    root["voltage_limits"] = {{"min", mg.voltage_limits.v_min}, {"max", mg.voltage_limits.v_max}};
    root["grid"] = {{"import_limit_kw", mg.grid_limit},
                    {"export_limit_kw", mg.export_limit},
                    {"allow_export", mg.allow_export}};
    root["prices"] = {{"grid_eur_ct_per_kwh", mg.prices.grid_price}};
    json buses = json::array();
    for (const auto& b : mg.buses)
        buses.push_back({{"id", b.id}, {"kind", to_string(b.kind)}, {"base_voltage_kv", b.base_voltage}});
    root["buses"] = buses;
    json branches = json::array();
    for (const auto& b : mg.branches)
        branches.push_back(
            {{"id", b.id}, {"from", b.from_bus}, {"to", b.to_bus}, {"r_ohm", b.resistance}, {"x_ohm", b.reactance}});
    root["branches"] = branches;
    json loads = json::array();
    for (const auto& l : mg.load_points)
        loads.push_back({{"bus", l.bus},
                         {"category", to_string(l.category)},
                         {"power_factor", l.power_factor},
                         {"profile_kw", l.profile}});
    root["loads"] = loads;
    json units = json::array();
    for (const auto& u : mg.units) {
        json unit = {{"name", u.name},
                     {"kind", to_string(u.kind)},
                     {"bus", u.bus},
                     {"p_min_kw", u.p_min},
                     {"p_max_kw", u.p_max},
                     {"cost_slope", u.cost_slope},
                     {"cost_fixed", u.cost_fixed},
                     {"dispatchable", u.dispatchable}};
        if (auto it = mg.renewable_availability.find(u.name); it != mg.renewable_availability.end())
            unit["availability_kw"] = it->second;
        units.push_back(unit);
    }
    root["units"] = units;
    if (mg.battery) {
        const Battery& b = *mg.battery;
        root["battery"] = {{"bus", b.bus},
                           {"soc_min_kwh", b.soc_min},
                           {"soc_max_kwh", b.soc_max},
                           {"p_max_kw", b.p_max},
                           {"eta_charge", b.eta_charge},
                           {"eta_discharge", b.eta_discharge},
                           {"self_discharge_per_h", b.self_discharge},
                           {"soc_initial_kwh", b.soc_initial},
                           {"usage_cost", b.usage_cost}};
    }
    json contingencies = json::array();
    for (const auto& c : mg.contingencies)
        contingencies.push_back({{"id", c.id},
                                 {"element", c.failed_element},
                                 {"lambda_per_h", c.lambda},
                                 {"repair_h", c.repair_time}});
    json oc;
    for (std::size_t k = 0; k < kLoadCategoryCount; ++k) {
        const auto category = static_cast<LoadCategory>(k);
        oc[to_string(category)] = outage_steps_to_json(mg.outage_costs.steps(category));
    }
    root["reliability"] = {{"contingencies", contingencies}, {"outage_costs", oc}};
    if (mg.demand_response) {
        const DrProgram& dr = *mg.demand_response;
        json participation;
        for (std::size_t k = 0; k < kLoadCategoryCount; ++k)
            participation[to_string(static_cast<LoadCategory>(k))] = static_cast<bool>(dr.participation[k]);
        root["demand_response"] = {{"shiftable_fraction", dr.shiftable_fraction},
                                   {"participation", participation},
                                   {"shift_cost", dr.shift_cost}};
    }
    if (mg.judgment_matrix || mg.direct_weights) {
        json w = json::object();
        if (mg.judgment_matrix)
            w["judgment_matrix"] = *mg.judgment_matrix;
        if (mg.direct_weights)
            w["direct"] = *mg.direct_weights;
        root["weights"] = w;
    }
    return root;
}

} // namespace

MicrogridCase parse_case(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("case: malformed document: ") + e.what());
    }
    MicrogridCase mg = from_json(root);
    validate_case(mg);
    return mg;
}

MicrogridCase load_case(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open case file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_case(buffer.str());
}

std::string serialize_case(const MicrogridCase& microgrid)
{
    return to_json(microgrid).dump(2) + "\n";
}

void save_case(const MicrogridCase& microgrid, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write case file '" + path.string() + "'");
    out << serialize_case(microgrid);
}

} // namespace mgd
