#include "mgd/sqp.hpp"

#include <cmath>
#include <limits>

#include "mgd/errors.hpp"
#include "mgd/gradient.hpp"
#include "mgd/parallel.hpp"

namespace mgd {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SqpStatus status)
{
    switch (status) {
    case SqpStatus::Converged: return "converged";
    case SqpStatus::MaxIterations: return "max_iterations";
    case SqpStatus::Stalled: return "stalled";
    case SqpStatus::QpFailed: return "qp_failed";
    }
    return "?";
}

double constraint_violation(const NlpPoint& point)
{
    double v = 0.0;
    for (Index i = 0; i < point.eq.size(); ++i)
        v = std::max(v, std::abs(point.eq[i]));
    for (Index i = 0; i < point.ineq.size(); ++i)
        v = std::max(v, point.ineq[i]);
    return v;
}

namespace {

double l1_violation(const VectorXd& eq, const VectorXd& ineq)
{
    return eq.cwiseAbs().sum() + ineq.cwiseMax(0.0).sum();
}

// Works on the free variables only, scaled to z in [0, 1] where the box is
// finite.
class ScaledProblem {
public:
    ScaledProblem(const Nlp& nlp, const VectorXd& x0) : nlp_(nlp), base_(x0)
    {
        const double inf = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < x0.size(); ++i) {
            if (nlp.lower[i] == nlp.upper[i]) {
                base_[i] = nlp.lower[i];
                continue;
            }
            free_.push_back(i);
            const bool finite = std::isfinite(nlp.lower[i]) && std::isfinite(nlp.upper[i]);
            offset_.push_back(finite ? nlp.lower[i] : 0.0);
            scale_.push_back(finite ? nlp.upper[i] - nlp.lower[i] : 1.0);
        }
        const Index n = size();
        lower_ = VectorXd::Constant(n, -inf);
        upper_ = VectorXd::Constant(n, inf);
        for (Index j = 0; j < n; ++j) {
            const Index i = free_[static_cast<std::size_t>(j)];
            if (std::isfinite(nlp.lower[i]))
                lower_[j] = (nlp.lower[i] - off(j)) / sc(j);
            if (std::isfinite(nlp.upper[i]))
                upper_[j] = (nlp.upper[i] - off(j)) / sc(j);
        }
    }

    Index size() const { return static_cast<Index>(free_.size()); }
    const VectorXd& lower() const { return lower_; }
    const VectorXd& upper() const { return upper_; }

    VectorXd to_x(const VectorXd& z) const
    {
        VectorXd x = base_;
        for (Index j = 0; j < size(); ++j)
            x[free_[static_cast<std::size_t>(j)]] = off(j) + sc(j) * z[j];
        return x;
    }

    VectorXd to_z(const VectorXd& x) const
    {
        VectorXd z(size());
        for (Index j = 0; j < size(); ++j)
            z[j] = (x[free_[static_cast<std::size_t>(j)]] - off(j)) / sc(j);
        return z.cwiseMax(lower_).cwiseMin(upper_);
    }

    NlpPoint evaluate(const VectorXd& z) const { return nlp_.evaluate(to_x(z)); }

private:
    double off(Index j) const { return offset_[static_cast<std::size_t>(j)]; }
    double sc(Index j) const { return scale_[static_cast<std::size_t>(j)]; }

    const Nlp& nlp_;
    VectorXd base_;
    std::vector<Index> free_;
    std::vector<double> offset_, scale_;
    VectorXd lower_, upper_;
};

struct Derivatives {
    VectorXd grad;
    MatrixXd eq_jac;
    MatrixXd ineq_jac;
};

Derivatives differentiate(const ScaledProblem& problem, const VectorXd& z, const NlpPoint& at, double rel,
                          std::size_t threads, int& evaluations)
{
    const Index n = z.size();
    Derivatives d;
    d.grad = VectorXd::Zero(n);
    d.eq_jac = MatrixXd::Zero(at.eq.size(), n);
    d.ineq_jac = MatrixXd::Zero(at.ineq.size(), n);
    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t k) {
            const auto j = static_cast<Index>(k);
            const double h = fd_step(z[j], rel);
            VectorXd zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            const NlpPoint p = problem.evaluate(zp);
            const NlpPoint m = problem.evaluate(zm);
            d.grad[j] = (p.objective - m.objective) / (2.0 * h);
            d.eq_jac.col(j) = (p.eq - m.eq) / (2.0 * h);
            d.ineq_jac.col(j) = (p.ineq - m.ineq) / (2.0 * h);
        },
        threads);
    evaluations += static_cast<int>(2 * n);
    return d;
}

VectorXd lagrangian_gradient(const Derivatives& d, double sigma, const VectorXd& lambda, const VectorXd& mu)
{
    VectorXd g = sigma * d.grad;
    if (lambda.size() > 0)
        g += d.eq_jac.transpose() * lambda;
    if (mu.size() > 0)
        g += d.ineq_jac.transpose() * mu;
    return g;
}

} // namespace

SqpResult sqp_solve(const Nlp& nlp, const VectorXd& x0_in, const SqpOptions& options)
{
    const Index n_full = x0_in.size();
    if (nlp.lower.size() != n_full || nlp.upper.size() != n_full)
        throw ValidationError("SQP bounds do not match the start point");
    const VectorXd x0 = x0_in.cwiseMax(nlp.lower).cwiseMin(nlp.upper);
    const ScaledProblem problem(nlp, x0);
    const Index n = problem.size();

    SqpResult result;
    VectorXd z = problem.to_z(x0);
    NlpPoint point = problem.evaluate(z);
    result.evaluations = 1;
    const Index m_eq = point.eq.size();
    const Index m_in = point.ineq.size();

    auto consider = [&](const VectorXd& zc, const NlpPoint& pc) {
        const double v = constraint_violation(pc);
        const bool feasible = v <= options.tol_feas;
        bool better;
        if (result.x.size() == 0)
            better = true;
        else if (feasible != result.feasible)
            better = feasible;
        else if (feasible)
            better = pc.objective < result.point.objective;
        else
            better = v < result.violation;
        if (better) {
            result.x = problem.to_x(zc);
            result.point = pc;
            result.violation = v;
            result.feasible = feasible;
        }
    };
    consider(z, point);

    SqpState& state = result.state;
    state.hessian_approx = MatrixXd::Identity(n, n);
    state.eq_multipliers = VectorXd::Zero(m_eq);
    state.ineq_multipliers = VectorXd::Zero(m_in);
    state.x = x0;

    if (n == 0) {
        result.status = SqpStatus::Converged;
        result.trace.push_back({0, point.objective, point.objective, point.objective, 0.0, result.violation, 0.0, 0.0, QpStatus::Optimal});
        return result;
    }

    Derivatives der = differentiate(problem, z, point, options.fd_relative_step, options.threads, result.evaluations);
    double sigma = 1.0;
    if (options.scale_objective) {
        const double gmax = der.grad.cwiseAbs().maxCoeff();
        if (gmax > 0.0 && std::isfinite(gmax))
            sigma = 1.0 / gmax;
    }
    MatrixXd& hess = state.hessian_approx;
    double& penalty = state.merit_penalty;

    result.status = SqpStatus::MaxIterations;
    int steps = 0;
    while (true) {
        QpProblem qp;
        qp.hessian = hess;
        qp.gradient = sigma * der.grad;
        qp.eq_jacobian = der.eq_jac;
        qp.eq_values = point.eq;
        qp.ineq_jacobian = der.ineq_jac;
        qp.ineq_values = point.ineq;
        qp.lower = problem.lower() - z;
        qp.upper = problem.upper() - z;
        for (Index j = 0; j < n; ++j) {
            // Guard against round-off pushing z a hair outside its box.
            qp.lower[j] = std::min(qp.lower[j], 0.0);
            qp.upper[j] = std::max(qp.upper[j], 0.0);
        }
        const QpResult sub = solve_qp(qp, options.qp);
        if (sub.status == QpStatus::Failed || sub.status == QpStatus::Infeasible) {
            result.status = SqpStatus::QpFailed;
            break;
        }
        if (sub.status == QpStatus::Relaxed)
            result.used_elastic = true;
        const VectorXd& d = sub.direction;

        // KKT residual of the current point with the subproblem multipliers.
        VectorXd stationarity = lagrangian_gradient(der, sigma, sub.eq_multipliers, sub.ineq_multipliers) -
                                sub.lower_multipliers + sub.upper_multipliers;
        double complementarity = 0.0;
        for (Index i = 0; i < m_in; ++i)
            complementarity = std::max(complementarity, std::abs(sub.ineq_multipliers[i] * point.ineq[i]));
        for (Index j = 0; j < n; ++j) {
            if (std::isfinite(problem.lower()[j]))
                complementarity = std::max(complementarity, sub.lower_multipliers[j] * (z[j] - problem.lower()[j]));
            if (std::isfinite(problem.upper()[j]))
                complementarity = std::max(complementarity, sub.upper_multipliers[j] * (problem.upper()[j] - z[j]));
        }
        const double violation = constraint_violation(point);
        const double kkt = std::max({stationarity.cwiseAbs().maxCoeff(), complementarity, violation});
        state.kkt_residual = kkt;
        state.eq_multipliers = sub.eq_multipliers;
        state.ineq_multipliers = sub.ineq_multipliers;
        state.iteration = steps;
        state.x = problem.to_x(z);

        double multiplier_norm = 0.0;
        if (m_eq > 0)
            multiplier_norm = std::max(multiplier_norm, sub.eq_multipliers.cwiseAbs().maxCoeff());
        if (m_in > 0)
            multiplier_norm = std::max(multiplier_norm, sub.ineq_multipliers.cwiseAbs().maxCoeff());
        penalty = std::max(penalty, multiplier_norm + options.penalty_margin);

        const double viol1 = l1_violation(point.eq, point.ineq);
        const double merit = sigma * point.objective + penalty * viol1;
        SqpTraceRow row{steps, point.objective, merit, merit, kkt, violation, 0.0, 0.0, sub.status};

        if ((kkt <= options.tol_kkt && violation <= options.tol_feas) || d.cwiseAbs().maxCoeff() <= 1e-14) {
            result.trace.push_back(row);
            result.status = kkt <= options.tol_kkt && violation <= options.tol_feas ? SqpStatus::Converged
                                                                                    : SqpStatus::Stalled;
            break;
        }
        if (steps >= options.max_iterations) {
            result.trace.push_back(row);
            result.status = SqpStatus::MaxIterations;
            break;
        }

        // Predicted change of the merit function along d.
        VectorXd lin_eq = point.eq + der.eq_jac * d;
        VectorXd lin_in = point.ineq + der.ineq_jac * d;
        double slope = sigma * der.grad.dot(d) + penalty * (l1_violation(lin_eq, lin_in) - viol1);
        slope = std::min(slope, 0.0);

        double alpha = 1.0;
        bool accepted = false;
        double merit_new = merit;
        VectorXd z_new;
        NlpPoint p_new;
        while (alpha >= options.alpha_min) {
            z_new = (z + alpha * d).cwiseMax(problem.lower()).cwiseMin(problem.upper());
            bool ok = true;
            try {
                p_new = problem.evaluate(z_new);
            } catch (const ConvergenceError&) {
                ok = false;
            }
            ++result.evaluations;
            if (ok) {
                merit_new = sigma * p_new.objective + penalty * l1_violation(p_new.eq, p_new.ineq);
                if (std::isfinite(merit_new) && merit_new <= merit + options.armijo * alpha * slope) {
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            result.trace.push_back(row);
            result.status = SqpStatus::Stalled;
            break;
        }

        const VectorXd s = z_new - z;
        row.step_norm = s.cwiseAbs().maxCoeff();
        row.alpha = alpha;
        row.accepted_merit = merit_new;
        result.trace.push_back(row);

        Derivatives der_new =
            differentiate(problem, z_new, p_new, options.fd_relative_step, options.threads, result.evaluations);
        VectorXd y = lagrangian_gradient(der_new, sigma, sub.eq_multipliers, sub.ineq_multipliers) -
                     lagrangian_gradient(der, sigma, sub.eq_multipliers, sub.ineq_multipliers);
        const VectorXd hs = hess * s;
        const double shs = s.dot(hs);
        if (shs > 1e-300) {
            double sy = s.dot(y);
            if (sy < 0.2 * shs) {
                const double theta = 0.8 * shs / (shs - sy);
                y = theta * y + (1.0 - theta) * hs;
                sy = s.dot(y);
            }
            if (sy > 0.0) {
                hess += y * y.transpose() / sy - hs * hs.transpose() / shs;
                hess = 0.5 * (hess + hess.transpose()).eval();
            }
        }

        z = z_new;
        point = p_new;
        der = std::move(der_new);
        ++steps;
        consider(z, point);
    }

    result.iterations = steps;
    return result;
}

} // namespace mgd
