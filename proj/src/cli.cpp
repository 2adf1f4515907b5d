#include "mgd/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgd/ahp.hpp"
#include "mgd/dr.hpp"
#include "mgd/errors.hpp"
#include "mgd/format.hpp"
#include "mgd/log.hpp"
#include "mgd/powerflow.hpp"
#include "mgd/reliability.hpp"
#include "mgd/scenario.hpp"

namespace mgd {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Eigen::Index;

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        parts.push_back(item);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(trim(text), &used);
        if (used != trim(text).size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError(what + ": '" + text + "' is not a number");
    }
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int exit_code_for(const Error& e)
{
    const std::string kind = e.kind();
    if (kind == "convergence" || kind == "voltage_collapse")
        return kExitConvergence;
    if (kind == "infeasible")
        return kExitInfeasible;
    return kExitValidation;
}

std::string error_line(const std::string& kind, int code, const std::string& message)
{
    std::string flat = message;
    std::replace(flat.begin(), flat.end(), '\n', ' ');
    return "error: kind=" + kind + " exit=" + std::to_string(code) + " message=" + flat;
}

json bundle_json(const ObjectiveBundle& b)
{
    return {{"f1_cost_eur_ct", b.f1_cost},
            {"f2_loss_kw", b.f2_loss},
            {"f3_unsupplied_eur_ct", b.f3_ens},
            {"f4_voltage_deviation", b.f4_vdev}};
}

json weights_json(const ObjectiveVector& w)
{
    return json(std::vector<double>(w.begin(), w.end()));
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace)
{
    out << "phase,iteration,objective,merit,kkt_residual,violation,step_norm,alpha,qp_status\n";
    for (const auto& r : trace)
        out << r.phase << ',' << r.iteration << ',' << fmt_num(r.objective) << ',' << fmt_num(r.merit) << ','
            << fmt_num(r.kkt_residual) << ',' << fmt_num(r.violation) << ',' << fmt_num(r.step_norm) << ','
            << fmt_num(r.alpha) << ',' << r.qp_status << '\n';
}

// Marker files: ".incomplete" while a run directory is being written, FAILED
// when the command did not succeed.
class RunDirectory {
public:
    explicit RunDirectory(fs::path dir) : dir_(std::move(dir))
    {
        fs::create_directories(dir_);
        fs::remove(dir_ / "FAILED");
        write_file(dir_ / ".incomplete", "");
    }
    const fs::path& path() const { return dir_; }
    void succeed() { fs::remove(dir_ / ".incomplete"); }
    void fail(const std::string& line)
    {
        write_file(dir_ / "FAILED", line + "\n");
        fs::remove(dir_ / ".incomplete");
    }

private:
    fs::path dir_;
};

struct OptimizeArgs {
    std::string case_path;
    int scenario = -1;
    bool dr = false;
    std::uint64_t seed = 42;
    std::string weights;
    std::string ahp;
    std::string out;
    std::size_t threads = 0;
    std::size_t generations = GaConfig{}.generations;
    std::size_t population = GaConfig{}.population;
    int max_iterations = SqpOptions{}.max_iterations;
};

int cmd_validate(const std::string& path, std::ostream& out)
{
    const MicrogridCase mg = load_case(path);
    out << "ok: case '" << mg.name << "' buses=" << mg.buses.size() << " branches=" << mg.branches.size()
        << " loads=" << mg.load_points.size() << " units=" << mg.units.size()
        << " battery=" << (mg.battery ? "yes" : "no") << " contingencies=" << mg.contingencies.size()
        << " horizon=" << mg.horizon << " dr=" << (mg.demand_response ? "yes" : "no") << '\n';
    return kExitOk;
}

int cmd_powerflow(const std::string& case_path, const std::string& schedule_path, const std::string& out_dir,
                  std::ostream& out)
{
    const MicrogridCase mg = load_case(case_path);
    DispatchSchedule schedule = schedule_path.empty() ? DispatchSchedule::zeros(mg.units.size(), mg.horizon)
                                                      : read_schedule_csv(schedule_path, mg);
    const PowerFlowSolution pf = solve_horizon(mg, schedule);
    if (out_dir.empty()) {
        write_hourly_csv(out, pf);
    } else {
        RunDirectory dir(out_dir);
        std::ostringstream hourly, volts, amps;
        write_hourly_csv(hourly, pf);
        write_voltage_csv(volts, mg, pf);
        write_current_csv(amps, mg, pf);
        write_file(dir.path() / "hourly.csv", hourly.str());
        write_file(dir.path() / "voltages.csv", volts.str());
        write_file(dir.path() / "currents.csv", amps.str());
        dir.succeed();
        out << "wrote " << (dir.path() / "hourly.csv").string() << '\n';
    }
    for (const auto& v : pf.grid_violations)
        out << "warning: grid " << (v.bound == GridBound::Import ? "import" : "export") << " limit exceeded in hour "
            << v.hour + 1 << " by " << fmt_num(v.magnitude) << " kW\n";
    return kExitOk;
}

json summary_json(const MicrogridCase& mg, const ScenarioResult& r)
{
    json s;
    s["case"] = mg.name;
    s["scenario"] = static_cast<int>(r.scenario);
    s["label"] = scenario_label(r.scenario, r.with_dr);
    s["with_dr"] = r.with_dr;
    s["seed"] = r.seed;
    s["objective"] = r.objective;
    s["feasible"] = r.feasible;
    s["violation"] = r.violation;
    s["objectives"] = bundle_json(r.bundle);
    if (r.scenario == Scenario::Combined) {
        json bounds = json::array();
        for (std::size_t k = 0; k < kObjectiveCount; ++k)
            bounds.push_back({{"objective", to_string(static_cast<Objective>(k))},
                              {"min", r.bundle.bounds[k].min},
                              {"max", r.bundle.bounds[k].max}});
        s["bounds"] = bounds;
        s["weights"] = weights_json(r.bundle.weights);
        s["scalar"] = r.bundle.scalar;
    }
    const auto& d = r.diagnostics;
    s["diagnostics"] = {{"selected", d.selected},
                        {"seed_objective", d.seed_objective},
                        {"seed_feasible", d.seed_feasible},
                        {"sqp_objective", d.sqp_objective},
                        {"sqp_feasible", d.sqp_feasible},
                        {"sqp_status", to_string(d.sqp_status)},
                        {"sqp_iterations", d.sqp_iterations},
                        {"kkt_residual", d.kkt_residual},
                        {"used_elastic_qp", d.used_elastic},
                        {"commitment_flips", d.commitment_flips},
                        {"evaluations", d.evaluations}};
    return s;
}

void write_run(const fs::path& dir, const MicrogridCase& mg, const ScenarioResult& r, const json& config,
               const std::optional<double>& reference)
{
    write_file(dir / "config.json", config.dump(2) + "\n");
    write_file(dir / "case.json", serialize_case(mg));
    const auto ev = evaluate_schedule(mg, r.schedule);
    std::ostringstream sched;
    write_schedule_csv(sched, mg, r.schedule, ev.pf.slack_series(), ev.soc);
    write_file(dir / "schedule.csv", sched.str());
    json summary = summary_json(mg, r);
    if (reference)
        summary["without_dr_objective"] = *reference;
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    std::ostringstream trace;
    write_trace_csv(trace, r.trace);
    write_file(dir / "trace.csv", trace.str());
}

int cmd_optimize(const OptimizeArgs& a, std::ostream& out)
{
    const MicrogridCase mg = load_case(a.case_path);
    const Scenario scenario = scenario_from_int(a.scenario);
    if (a.dr && scenario != Scenario::Combined)
        throw ValidationError("--dr applies to scenario 5 only");
    if (a.dr && !mg.demand_response)
        throw ValidationError("--dr given but the case has no demand_response section");

    ObjectiveVector weights{};
    std::string weights_source;
    json ahp_report;
    if (!a.weights.empty()) {
        weights = parse_weights(a.weights);
        weights_source = "flag";
    } else if (!a.ahp.empty()) {
        const json doc = json::parse(read_file(a.ahp), nullptr, false);
        if (doc.is_discarded())
            throw ParseError(a.ahp + ": not valid JSON");
        const json& m = doc.is_object() ? doc.at("judgment_matrix") : doc;
        const AhpResult ahp = derive_weights(ComparisonMatrix::from_rows(m.get<std::vector<std::vector<double>>>()));
        if (ahp.weights.size() != static_cast<Index>(kObjectiveCount))
            throw ValidationError("AHP matrix must be 4x4");
        for (std::size_t k = 0; k < kObjectiveCount; ++k)
            weights[k] = ahp.weights[static_cast<Index>(k)];
        weights_source = "ahp:" + a.ahp;
        ahp_report = {{"consistency_ratio", ahp.consistency_ratio}, {"lambda_max", ahp.lambda_max}};
    } else {
        weights = default_weights(mg);
        weights_source = mg.direct_weights ? "case:direct" : (mg.judgment_matrix ? "case:ahp" : "default:ahp");
    }

    RunOptions options;
    options.seed = a.seed;
    options.threads = a.threads;
    options.ga.generations = a.generations;
    options.ga.population = a.population;
    options.sqp.max_iterations = a.max_iterations;

    const std::string default_dir = "run-s" + std::to_string(a.scenario) + (a.dr ? "-dr" : "");
    RunDirectory dir(a.out.empty() ? fs::path(default_dir) : fs::path(a.out));

    json config;
    config["case_path"] = a.case_path;
    config["scenario"] = a.scenario;
    config["dr"] = a.dr;
    config["seed"] = a.seed;
    config["weights"] = weights_json(weights);
    config["weights_source"] = weights_source;
    if (!ahp_report.is_null())
        config["ahp"] = ahp_report;
    config["ga"] = {{"population", options.ga.population},
                    {"generations", options.ga.generations},
                    {"tournament", options.ga.tournament},
                    {"crossover_rate", options.ga.crossover_rate},
                    {"sbx_eta", options.ga.sbx_eta},
                    {"mutation_sigma", options.ga.mutation_sigma},
                    {"penalty", options.ga.penalty},
                    {"plateau_generations", options.ga.plateau_generations},
                    {"elite", options.ga.elite}};
    config["sqp"] = {{"tol_kkt", options.sqp.tol_kkt},
                     {"tol_feas", options.sqp.tol_feas},
                     {"max_iterations", options.sqp.max_iterations},
                     {"fd_relative_step", options.sqp.fd_relative_step},
                     {"alpha_min", options.sqp.alpha_min},
                     {"flip_passes", options.flip_passes}};

    ScenarioResult result;
    std::optional<double> reference;
    try {
        if (scenario == Scenario::Combined) {
            const BoundsRun bounds = compute_bounds(mg, weights, options);
            result = run_scalarized(mg, bounds.setup, options);
            if (a.dr) {
                reference = result.objective;
                result = optimize_with_dr(mg, bounds.setup, result, options);
            }
        } else {
            result = run_scenario(mg, scenario, weights, options);
        }
        write_run(dir.path(), mg, result, config, reference);
    } catch (const Error& e) {
        dir.fail(error_line(e.kind(), exit_code_for(e), e.what()));
        throw;
    }

    out << scenario_label(result.scenario, result.with_dr) << ": cost " << fmt_num(result.bundle.f1_cost / 100.0)
        << " EUR, losses " << fmt_num(result.bundle.f2_loss) << " kW, unsupplied energy "
        << fmt_num(result.bundle.f3_ens / 100.0) << " EUR, voltage deviation " << fmt_num(result.bundle.f4_vdev)
        << '\n';
    if (!result.feasible) {
        const std::string line = error_line("infeasible", kExitInfeasible,
                                            "best schedule violates limits by " + fmt_num(result.violation));
        dir.fail(line);
        throw InfeasibleError("best schedule violates limits by " + fmt_num(result.violation));
    }
    dir.succeed();
    out << "wrote " << dir.path().string() << '\n';
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& dirs, bool csv, std::ostream& out)
{
    struct Row {
        std::string label;
        double cost, loss, ens, vdev;
    };
    std::vector<Row> rows;
    for (const auto& d : dirs) {
        const fs::path dir(d);
        if (fs::exists(dir / "FAILED") || fs::exists(dir / ".incomplete"))
            throw ValidationError(d + " is marked as failed or incomplete");
        const json s = json::parse(read_file(dir / "summary.json"), nullptr, false);
        if (s.is_discarded())
            throw ParseError((dir / "summary.json").string() + ": not valid JSON");
        const json& o = s.at("objectives");
        rows.push_back({s.at("label").get<std::string>(), o.at("f1_cost_eur_ct").get<double>() / 100.0,
                        o.at("f2_loss_kw").get<double>(), o.at("f3_unsupplied_eur_ct").get<double>() / 100.0,
                        o.at("f4_voltage_deviation").get<double>()});
    }
    const char* headers[] = {"Scenario", "Cost (€)", "Losses (kW)", "Cost of unsupplied energy (€)",
                             "Voltage deviation index"};
    auto num = [](double v, int digits) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
        return std::string(buf);
    };
    if (csv) {
        out << headers[0] << ',' << headers[1] << ',' << headers[2] << ',' << headers[3] << ',' << headers[4] << '\n';
        for (const auto& r : rows)
            out << r.label << ',' << num(r.cost, 2) << ',' << num(r.loss, 3) << ',' << num(r.ens, 4) << ','
                << num(r.vdev, 4) << '\n';
        return kExitOk;
    }
    std::vector<std::array<std::string, 5>> cells;
    cells.push_back({headers[0], headers[1], headers[2], headers[3], headers[4]});
    for (const auto& r : rows)
        cells.push_back({r.label, num(r.cost, 2), num(r.loss, 3), num(r.ens, 4), num(r.vdev, 4)});
    // Display width: count UTF-8 code points, not bytes.
    auto width = [](const std::string& s) {
        return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
    };
    std::array<std::size_t, 5> w{};
    for (const auto& row : cells)
        for (std::size_t c = 0; c < 5; ++c)
            w[c] = std::max(w[c], width(row[c]));
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t c = 0; c < 5; ++c) {
            const std::string pad(w[c] - width(cells[r][c]), ' ');
            out << (c == 0 ? cells[r][c] + pad : "  " + pad + cells[r][c]);
        }
        out << '\n';
        if (r == 0) {
            std::size_t total = w[0];
            for (std::size_t c = 1; c < 5; ++c)
                total += w[c] + 2;
            out << std::string(total, '-') << '\n';
        }
    }
    return kExitOk;
}

int cmd_report(const std::string& run_dir, std::ostream& out)
{
    const fs::path dir(run_dir);
    if (fs::exists(dir / "FAILED") || fs::exists(dir / ".incomplete"))
        throw ValidationError(run_dir + " is marked as failed or incomplete");
    const MicrogridCase mg = parse_case(read_file(dir / "case.json"));
    const DispatchSchedule schedule = read_schedule_csv(dir / "schedule.csv", mg);
    const auto ev = evaluate_schedule(mg, schedule);
    const fs::path rep = dir / "report";
    fs::create_directories(rep);

    std::ostringstream dispatch;
    dispatch << "hour";
    for (const auto& u : mg.units)
        dispatch << ',' << u.name << "_kw";
    dispatch << ",battery_kw,soc_kwh,grid_kw,loss_kw,price_eur_ct_per_kwh\n";
    for (std::size_t t = 0; t < mg.horizon; ++t) {
        dispatch << t + 1;
        for (std::size_t u = 0; u < mg.units.size(); ++u)
            dispatch << ',' << fmt_num(schedule.dg_setpoints(static_cast<Index>(u), static_cast<Index>(t)));
        dispatch << ',' << fmt_num(schedule.battery_power[static_cast<Index>(t)]) << ','
                 << fmt_num(ev.soc.empty() ? 0.0 : ev.soc[t]) << ',' << fmt_num(ev.pf.hours[t].slack_kw) << ','
                 << fmt_num(ev.pf.hours[t].loss_kw) << ',' << fmt_num(mg.prices.grid_price[t]) << '\n';
    }
    write_file(rep / "dispatch.csv", dispatch.str());

    std::ostringstream hourly, volts, amps, cont, loads;
    write_hourly_csv(hourly, ev.pf);
    write_voltage_csv(volts, mg, ev.pf);
    write_current_csv(amps, mg, ev.pf);
    write_contingency_csv(cont, mg, contingency_report(mg, schedule, ev.soc));
    const auto shifted = effective_loads(mg, schedule);
    loads << "hour,demand_before_kw,demand_after_kw,dr_shift_kw,grid_kw\n";
    for (std::size_t t = 0; t < mg.horizon; ++t) {
        double after = 0.0;
        for (const auto& lp : shifted)
            after += lp.profile[t];
        loads << t + 1 << ',' << fmt_num(mg.total_demand(t)) << ',' << fmt_num(after) << ','
              << fmt_num(schedule.has_dr() ? schedule.dr_shift[static_cast<Index>(t)] : 0.0) << ','
              << fmt_num(ev.pf.hours[t].slack_kw) << '\n';
    }
    write_file(rep / "hourly.csv", hourly.str());
    write_file(rep / "voltages.csv", volts.str());
    write_file(rep / "currents.csv", amps.str());
    write_file(rep / "contingencies.csv", cont.str());
    write_file(rep / "loads.csv", loads.str());
    out << "wrote " << rep.string() << '\n';
    return kExitOk;
}

} // namespace

ObjectiveVector parse_weights(const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != kObjectiveCount)
        throw ValidationError("--weights needs four comma-separated values, got '" + text + "'");
    ObjectiveVector w{};
    double sum = 0.0;
    for (std::size_t k = 0; k < kObjectiveCount; ++k) {
        w[k] = parse_number(parts[k], "--weights");
        if (!(w[k] >= 0.0) || !std::isfinite(w[k]))
            throw ValidationError("--weights entries must be finite and >= 0");
        sum += w[k];
    }
    if (sum <= 0.0)
        throw ValidationError("--weights must not all be zero");
    for (double& v : w)
        v /= sum;
    return w;
}

void write_schedule_csv(std::ostream& out, const MicrogridCase& mg, const DispatchSchedule& s,
                        const std::vector<double>& grid_kw, const std::vector<double>& soc)
{
    out << "hour";
    for (const auto& u : mg.units)
        out << ',' << u.name;
    out << ",battery_kw";
    if (s.has_dr())
        out << ",dr_shift_kw";
    out << ",grid_kw,soc_kwh\n";
    for (std::size_t t = 0; t < s.horizon(); ++t) {
        const auto col = static_cast<Index>(t);
        out << t + 1;
        for (Index u = 0; u < s.dg_setpoints.rows(); ++u)
            out << ',' << fmt_exact(s.dg_setpoints(u, col));
        out << ',' << fmt_exact(s.battery_power[col]);
        if (s.has_dr())
            out << ',' << fmt_exact(s.dr_shift[col]);
        out << ',' << fmt_num(t < grid_kw.size() ? grid_kw[t] : 0.0) << ','
            << fmt_num(t < soc.size() ? soc[t] : 0.0) << '\n';
    }
}

DispatchSchedule read_schedule_csv(std::istream& in, const MicrogridCase& mg)
{
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("schedule: empty file");
    const auto header = split(trim(line), ',');
    std::map<std::string, std::size_t> column;
    for (std::size_t c = 0; c < header.size(); ++c)
        column[trim(header[c])] = c;
    auto need = [&](const std::string& name) {
        const auto it = column.find(name);
        if (it == column.end())
            throw ParseError("schedule: missing column '" + name + "'");
        return it->second;
    };
    std::vector<std::size_t> unit_cols;
    for (const auto& u : mg.units)
        unit_cols.push_back(need(u.name));
    const std::size_t battery_col = need("battery_kw");
    const bool has_dr = column.count("dr_shift_kw") > 0;

    DispatchSchedule s = DispatchSchedule::zeros(mg.units.size(), mg.horizon, has_dr);
    std::vector<bool> seen(mg.horizon, false);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        const auto cells = split(trim(line), ',');
        if (cells.size() != header.size())
            throw ParseError("schedule: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(header.size()));
        const double hour = parse_number(cells[need("hour")], "schedule hour");
        if (hour < 1 || hour > static_cast<double>(mg.horizon) || hour != std::floor(hour))
            throw ParseError("schedule: hour " + cells[need("hour")] + " is outside 1.." + std::to_string(mg.horizon));
        const auto t = static_cast<std::size_t>(hour) - 1;
        if (seen[t])
            throw ParseError("schedule: hour " + std::to_string(t + 1) + " appears twice");
        seen[t] = true;
        const auto col = static_cast<Index>(t);
        for (std::size_t u = 0; u < unit_cols.size(); ++u)
            s.dg_setpoints(static_cast<Index>(u), col) = parse_number(cells[unit_cols[u]], mg.units[u].name);
        s.battery_power[col] = parse_number(cells[battery_col], "battery_kw");
        if (has_dr)
            s.dr_shift[col] = parse_number(cells[column["dr_shift_kw"]], "dr_shift_kw");
    }
    for (std::size_t t = 0; t < mg.horizon; ++t)
        if (!seen[t])
            throw ParseError("schedule: hour " + std::to_string(t + 1) + " is missing");
    return s;
}

DispatchSchedule read_schedule_csv(const fs::path& path, const MicrogridCase& mg)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read schedule " + path.string());
    return read_schedule_csv(in, mg);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Day-ahead microgrid dispatch: power flow, scenario optimisation and reports", "mgdispatch"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::string case_path, schedule_path, out_dir;
    auto* validate = app.add_subcommand("validate", "Check a case file");
    validate->add_option("case", case_path, "Case file (JSON)")->required();

    auto* powerflow = app.add_subcommand("powerflow", "Solve the hourly power flow of a schedule");
    powerflow->add_option("case", case_path, "Case file (JSON)")->required();
    powerflow->add_option("--schedule", schedule_path, "Schedule CSV (default: grid only)");
    powerflow->add_option("--out", out_dir, "Directory for hourly, voltage and current CSVs");

    OptimizeArgs oa;
    auto* optimize = app.add_subcommand("optimize", "Run one scenario");
    optimize->add_option("case", oa.case_path, "Case file (JSON)")->required();
    optimize->add_option("--scenario", oa.scenario, "0 initial, 1 cost, 2 losses, 3 reliability, 4 voltage, 5 combined")
        ->required()
        ->check(CLI::Range(0, 5));
    optimize->add_flag("--dr", oa.dr, "Scenario 5 with demand response");
    optimize->add_option("--seed", oa.seed, "RNG seed");
    auto* wopt = optimize->add_option("--weights", oa.weights, "w1,w2,w3,w4 for scenario 5");
    optimize->add_option("--ahp", oa.ahp, "JSON file with a 4x4 judgment matrix")->excludes(wopt);
    optimize->add_option("--out", oa.out, "Output directory (default run-s<N>[-dr])");
    optimize->add_option("--threads", oa.threads, "Worker threads (default: MGDISPATCH_THREADS or all cores)");
    optimize->add_option("--generations", oa.generations, "GA generations")->check(CLI::PositiveNumber);
    optimize->add_option("--population", oa.population, "GA population")->check(CLI::Range(2, 100000));
    optimize->add_option("--max-iterations", oa.max_iterations, "SQP iteration cap")->check(CLI::NonNegativeNumber);

    std::vector<std::string> run_dirs;
    bool csv = false;
    auto* compare = app.add_subcommand("compare", "Cross-scenario objective table");
    compare->add_option("runs", run_dirs, "Run directories")->required();
    compare->add_flag("--csv", csv, "CSV instead of an aligned table");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Per-hour CSVs for a run directory");
    report->add_option("run", report_dir, "Run directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty())
        reversed.pop_back(); // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << error_line("usage", kExitValidation, e.what()) << '\n';
        return kExitValidation;
    }

    try {
        if (*validate)
            return cmd_validate(case_path, out);
        if (*powerflow)
            return cmd_powerflow(case_path, schedule_path, out_dir, out);
        if (*optimize)
            return cmd_optimize(oa, out);
        if (*compare)
            return cmd_compare(run_dirs, csv, out);
        if (*report)
            return cmd_report(report_dir, out);
    } catch (const Error& e) {
        const int code = exit_code_for(e);
        err << error_line(e.kind(), code, e.what()) << '\n';
        return code;
    } catch (const json::exception& e) {
        err << error_line("parse", kExitValidation, e.what()) << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << error_line("internal", kExitInternal, e.what()) << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

} // namespace mgd
