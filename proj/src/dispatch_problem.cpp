#include "mgd/dispatch_problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgd/dr.hpp"
#include "mgd/errors.hpp"
#include "mgd/reliability.hpp"

namespace mgd {

using Eigen::Index;
using Eigen::VectorXd;

ObjectiveSpec ObjectiveSpec::single(Objective objective, double scale)
{
    ObjectiveSpec s;
    s.mode = Mode::Single;
    s.objective = objective;
    s.scale = scale > 0.0 ? scale : 1.0;
    return s;
}

ObjectiveSpec ObjectiveSpec::scalarized(const BoundsVector& bounds, const ObjectiveVector& weights)
{
    ObjectiveSpec s;
    s.mode = Mode::Scalarized;
    s.bounds = bounds;
    s.weights = weights;
    return s;
}

double ObjectiveSpec::internal(const ObjectiveVector& raw) const
{
    if (mode == Mode::Single)
        return raw[static_cast<std::size_t>(objective)] / scale;
    double value = 0.0;
    for (std::size_t k = 0; k < kObjectiveCount; ++k)
        if (!bounds[k].degenerate())
            value += weights[k] * (raw[k] - bounds[k].min) / (bounds[k].max - bounds[k].min);
    return value;
}

double ObjectiveSpec::official(const ObjectiveVector& raw) const
{
    if (mode == Mode::Single)
        return raw[static_cast<std::size_t>(objective)];
    return normalize_and_scalarize(raw, bounds, weights);
}

DispatchProblem::DispatchProblem(const MicrogridCase& mg, ObjectiveSpec spec, bool with_dr)
    : mg_(mg), spec_(spec), with_dr_(with_dr), units_(static_cast<Index>(mg.units.size())),
      horizon_(static_cast<Index>(mg.horizon))
{
    if (with_dr && !mg.demand_response)
        throw ValidationError("demand response requested but the case has no DR program");
    const Index n = compact_size();
    lower_ = VectorXd::Zero(n);
    upper_ = VectorXd::Zero(n);
    for (Index u = 0; u < units_; ++u)
        for (Index t = 0; t < horizon_; ++t)
            upper_[u * horizon_ + t] = mg.unit_cap(static_cast<std::size_t>(u), static_cast<std::size_t>(t));
    if (mg.battery) {
        lower_.segment(battery_offset(), horizon_).setConstant(-mg.battery->p_max);
        upper_.segment(battery_offset(), horizon_).setConstant(mg.battery->p_max);
    }
    if (with_dr) {
        const auto demand = participating_demand(mg);
        shift_limit_.resize(static_cast<std::size_t>(horizon_));
        shift_base_ = std::max(1e-9, std::accumulate(demand.begin(), demand.end(), 0.0));
        const Index off = battery_offset() + horizon_;
        for (Index t = 0; t < horizon_; ++t) {
            const auto ts = static_cast<std::size_t>(t);
            shift_limit_[ts] = mg.demand_response->shiftable_fraction[ts] * demand[ts];
            lower_[off + t] = -shift_limit_[ts];
            upper_[off + t] = shift_limit_[ts];
        }
    }
}

Index DispatchProblem::compact_size() const
{
    return (units_ + 1 + (with_dr_ ? 1 : 0)) * horizon_;
}

Index DispatchProblem::split_size() const
{
    return (units_ + 2 + (with_dr_ ? 1 : 0)) * horizon_;
}

VectorXd DispatchProblem::repair(const VectorXd& compact) const
{
    VectorXd x = compact.cwiseMax(lower_).cwiseMin(upper_);
    for (Index u = 0; u < units_; ++u) {
        const DgUnit& unit = mg_.units[static_cast<std::size_t>(u)];
        if (!unit.committable())
            continue;
        for (Index t = 0; t < horizon_; ++t) {
            double& p = x[u * horizon_ + t];
            if (p < 0.5 * unit.p_min)
                p = 0.0;
            else if (p < unit.p_min)
                p = unit.p_min;
        }
    }
    if (mg_.battery) {
        const Battery& b = *mg_.battery;
        const double dt = mg_.period_length;
        double level = b.soc_initial;
        for (Index t = 0; t < horizon_; ++t) {
            double& p = x[battery_offset() + t];
            const double kept = level * (1.0 - b.self_discharge);
            // Power that lands exactly on a level, charging or discharging.
            auto reach = [&](double target) {
                const double delta = target - kept;
                return delta >= 0.0 ? delta / (b.eta_charge * dt) : delta * b.eta_discharge / dt;
            };
            const double lo = std::clamp(reach(b.soc_min), -b.p_max, b.p_max);
            const double hi = std::clamp(reach(b.soc_max), -b.p_max, b.p_max);
            p = std::clamp(p, lo, std::max(lo, hi));
            level = kept + b.eta_charge * std::max(0.0, p) * dt + std::min(0.0, p) * dt / b.eta_discharge;
        }
    }
    if (with_dr_) {
        auto shift = x.segment(battery_offset() + horizon_, horizon_);
        const double excess = shift.sum();
        double room = 0.0;
        for (Index t = 0; t < horizon_; ++t)
            room += excess > 0.0 ? shift[t] + shift_limit_[static_cast<std::size_t>(t)]
                                 : shift_limit_[static_cast<std::size_t>(t)] - shift[t];
        if (excess != 0.0 && room > 0.0)
            for (Index t = 0; t < horizon_; ++t) {
                const double r = excess > 0.0 ? shift[t] + shift_limit_[static_cast<std::size_t>(t)]
                                              : shift_limit_[static_cast<std::size_t>(t)] - shift[t];
                shift[t] -= excess * r / room;
            }
    }
    return x;
}

DispatchSchedule DispatchProblem::to_schedule(const VectorXd& x) const
{
    DispatchSchedule s = DispatchSchedule::zeros(static_cast<std::size_t>(units_), static_cast<std::size_t>(horizon_),
                                                 with_dr_);
    for (Index u = 0; u < units_; ++u)
        s.dg_setpoints.row(u) = x.segment(u * horizon_, horizon_).transpose();
    s.battery_power = x.segment(battery_offset(), horizon_);
    if (with_dr_)
        s.dr_shift = x.segment(battery_offset() + horizon_, horizon_);
    return s;
}

VectorXd DispatchProblem::to_compact(const DispatchSchedule& s) const
{
    if (s.dg_setpoints.rows() != units_ || static_cast<Index>(s.horizon()) != horizon_)
        throw ValidationError("schedule dimensions do not match the case");
    VectorXd x = VectorXd::Zero(compact_size());
    for (Index u = 0; u < units_; ++u)
        x.segment(u * horizon_, horizon_) = s.dg_setpoints.row(u).transpose();
    x.segment(battery_offset(), horizon_) = s.battery_power;
    if (with_dr_ && s.has_dr())
        x.segment(battery_offset() + horizon_, horizon_) = s.dr_shift;
    return x;
}

VectorXd DispatchProblem::split_from_compact(const VectorXd& x) const
{
    VectorXd z = VectorXd::Zero(split_size());
    const Index b = battery_offset();
    z.head(b) = x.head(b);
    for (Index t = 0; t < horizon_; ++t) {
        z[b + t] = std::max(0.0, x[b + t]);
        z[b + horizon_ + t] = std::max(0.0, -x[b + t]);
    }
    if (with_dr_)
        z.segment(b + 2 * horizon_, horizon_) = x.segment(b + horizon_, horizon_);
    return z;
}

VectorXd DispatchProblem::compact_from_split(const VectorXd& z) const
{
    VectorXd x = VectorXd::Zero(compact_size());
    const Index b = battery_offset();
    x.head(b) = z.head(b);
    x.segment(b, horizon_) = z.segment(b, horizon_) - z.segment(b + horizon_, horizon_);
    if (with_dr_)
        x.segment(b + horizon_, horizon_) = z.segment(b + 2 * horizon_, horizon_);
    return x;
}

Commitment DispatchProblem::commitment(const VectorXd& x) const
{
    Commitment on(static_cast<std::size_t>(units_), std::vector<bool>(static_cast<std::size_t>(horizon_), true));
    for (Index u = 0; u < units_; ++u) {
        const DgUnit& unit = mg_.units[static_cast<std::size_t>(u)];
        if (!unit.committable())
            continue;
        for (Index t = 0; t < horizon_; ++t)
            on[static_cast<std::size_t>(u)][static_cast<std::size_t>(t)] = x[u * horizon_ + t] >= 0.5 * unit.p_min;
    }
    return on;
}

void DispatchProblem::split_bounds(const Commitment& on, VectorXd& lower, VectorXd& upper) const
{
    lower = VectorXd::Zero(split_size());
    upper = VectorXd::Zero(split_size());
    for (Index u = 0; u < units_; ++u) {
        const DgUnit& unit = mg_.units[static_cast<std::size_t>(u)];
        for (Index t = 0; t < horizon_; ++t) {
            const Index i = u * horizon_ + t;
            if (unit.committable()) {
                const bool is_on = on[static_cast<std::size_t>(u)][static_cast<std::size_t>(t)];
                lower[i] = is_on ? unit.p_min : 0.0;
                upper[i] = is_on ? unit.p_max : 0.0;
            } else {
                upper[i] = upper_[i];
            }
        }
    }
    const Index b = battery_offset();
    if (mg_.battery)
        upper.segment(b, 2 * horizon_).setConstant(mg_.battery->p_max);
    if (with_dr_) {
        lower.segment(b + 2 * horizon_, horizon_) = lower_.segment(b + horizon_, horizon_);
        upper.segment(b + 2 * horizon_, horizon_) = upper_.segment(b + horizon_, horizon_);
    }
}

void DispatchProblem::append_limits(const PowerFlowSolution& pf, std::span<const double> soc,
                                    const ObjectiveVector& raw, std::vector<double>& ineq) const
{
    const double v_max = mg_.voltage_limits.v_max, v_min = mg_.voltage_limits.v_min;
    const double export_limit = mg_.allow_export ? mg_.export_limit : 0.0;
    const double grid_scale = std::max(1e-9, mg_.grid_limit);
    for (std::size_t t = 0; t < pf.hours.size(); ++t) {
        const HourSolution& h = pf.hours[t];
        for (std::size_t i = 0; i < h.voltages.size(); ++i) {
            if (i == mg_.network.slack)
                continue;
            const double v = std::abs(h.voltages[i]);
            ineq.push_back((v - v_max) / v_max);
            ineq.push_back((v_min - v) / v_min);
        }
        ineq.push_back((h.slack_kw - mg_.grid_limit) / grid_scale);
        ineq.push_back((-h.slack_kw - export_limit) / grid_scale);
    }
    if (mg_.battery)
        for (double level : soc) {
            ineq.push_back((level - mg_.battery->soc_max) / mg_.battery->soc_max);
            ineq.push_back((mg_.battery->soc_min - level) / mg_.battery->soc_max);
        }
    if (spec_.mode == ObjectiveSpec::Mode::Scalarized && spec_.cap_at_max)
        for (std::size_t k = 0; k < kObjectiveCount; ++k)
            if (!spec_.bounds[k].degenerate())
                ineq.push_back((raw[k] - spec_.bounds[k].max) / std::max(1e-12, std::abs(spec_.bounds[k].max)));
}

NlpPoint DispatchProblem::evaluate_split(const VectorXd& z) const
{
    const DispatchSchedule schedule = to_schedule(compact_from_split(z));
    const PowerFlowSolution pf = solve_horizon(mg_, schedule);
    const Index b = battery_offset();
    const double dt = mg_.period_length;

    std::vector<double> soc;
    double throughput = 0.0, overlap = 0.0;
    if (mg_.battery) {
        const Battery& bat = *mg_.battery;
        double level = bat.soc_initial;
        for (Index t = 0; t < horizon_; ++t) {
            const double c = z[b + t], d = z[b + horizon_ + t];
            level = level * (1.0 - bat.self_discharge) + (bat.eta_charge * c - d / bat.eta_discharge) * dt;
            soc.push_back(level);
            throughput += (c + d) * bat.usage_cost * dt;
            overlap += c * d / (bat.p_max * bat.p_max);
        }
    }

    double cost = throughput;
    for (std::size_t t = 0; t < mg_.horizon; ++t) {
        for (Index u = 0; u < units_; ++u) {
            const DgUnit& unit = mg_.units[static_cast<std::size_t>(u)];
            const double p = schedule.dg_setpoints(u, static_cast<Index>(t));
            // The slope term is extended linearly below zero so central
            // differences at a lower bound see the true one-sided slope.
            const bool on = unit.committable() ? p >= 0.5 * unit.p_min : p > 0.0;
            cost += (unit.cost_slope * p + (on ? unit.cost_fixed : 0.0)) * dt;
        }
        double grid = pf.hours[t].slack_kw;
        if (!mg_.allow_export)
            grid = std::max(grid, 0.0);
        cost += grid * mg_.prices.grid_price[t] * dt;
        if (with_dr_)
            cost += std::max(0.0, schedule.dr_shift[static_cast<Index>(t)]) * mg_.demand_response->shift_cost * dt;
    }
    const ObjectiveVector raw{cost, eval_f2(pf), unsupplied_energy_cost(mg_, schedule, soc), eval_f4(mg_, pf)};

    NlpPoint point;
    point.objective = spec_.internal(raw) + kComplementarityWeight * overlap;
    std::vector<double> ineq;
    append_limits(pf, soc, raw, ineq);
    point.ineq = Eigen::Map<VectorXd>(ineq.data(), static_cast<Index>(ineq.size()));
    if (with_dr_)
        point.eq = VectorXd::Constant(1, schedule.dr_shift.sum() / shift_base_);
    else
        point.eq = VectorXd(0);
    return point;
}

GaEvaluation DispatchProblem::evaluate_compact(const VectorXd& x) const
{
    const NlpPoint p = evaluate_split(split_from_compact(x));
    return {p.objective, constraint_violation(p)};
}

GaProblem DispatchProblem::ga_problem() const
{
    GaProblem ga;
    ga.lower = lower_;
    ga.upper = upper_;
    ga.repair = [this](const VectorXd& x) { return repair(x); };
    ga.evaluate = [this](const VectorXd& x) { return evaluate_compact(x); };
    return ga;
}

Nlp DispatchProblem::nlp(const Commitment& on) const
{
    Nlp nlp;
    split_bounds(on, nlp.lower, nlp.upper);
    nlp.evaluate = [this](const VectorXd& z) { return evaluate_split(z); };
    return nlp;
}

DispatchProblem::Assessment DispatchProblem::assess(const DispatchSchedule& schedule, double tolerance) const
{
    Assessment a;
    a.evaluation = evaluate_schedule(mg_, schedule);
    const ObjectiveVector raw = a.evaluation.bundle.raw();
    a.objective = spec_.official(raw);

    std::vector<double> rows;
    append_limits(a.evaluation.pf, a.evaluation.soc, raw, rows);
    for (Index u = 0; u < units_; ++u) {
        const DgUnit& unit = mg_.units[static_cast<std::size_t>(u)];
        const double scale = std::max(1e-9, unit.p_max);
        for (Index t = 0; t < horizon_; ++t) {
            const double p = schedule.dg_setpoints(u, t);
            const double cap = mg_.unit_cap(static_cast<std::size_t>(u), static_cast<std::size_t>(t));
            rows.push_back(-p / scale);
            rows.push_back((p - cap) / scale);
            if (unit.committable() && p > 0.0)
                rows.push_back((unit.p_min - p) / scale);
        }
    }
    if (mg_.battery) {
        for (Index t = 0; t < horizon_; ++t)
            rows.push_back((std::abs(schedule.battery_power[t]) - mg_.battery->p_max) /
                           std::max(1e-9, mg_.battery->p_max));
    } else if (schedule.battery_power.cwiseAbs().maxCoeff() > 0.0) {
        rows.push_back(schedule.battery_power.cwiseAbs().maxCoeff());
    }
    if (schedule.has_dr()) {
        if (!with_dr_)
            rows.push_back(schedule.dr_shift.cwiseAbs().maxCoeff());
        else {
            rows.push_back(std::abs(schedule.dr_shift.sum()) / shift_base_);
            for (Index t = 0; t < horizon_; ++t)
                rows.push_back((std::abs(schedule.dr_shift[t]) - shift_limit_[static_cast<std::size_t>(t)]) /
                               shift_base_);
        }
    }
    a.violation = 0.0;
    for (double r : rows)
        a.violation = std::max(a.violation, r);
    a.feasible = a.violation <= tolerance;
    return a;
}

} // namespace mgd
