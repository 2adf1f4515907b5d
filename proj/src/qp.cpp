#include "mgd/qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "mgd/errors.hpp"

namespace mgd {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(QpStatus status)
{
    switch (status) {
    case QpStatus::Optimal: return "optimal";
    case QpStatus::Relaxed: return "relaxed";
    case QpStatus::Infeasible: return "infeasible";
    case QpStatus::Failed: return "failed";
    }
    return "?";
}

QpProblem QpProblem::unconstrained(const MatrixXd& hessian, const VectorXd& gradient)
{
    const Index n = gradient.size();
    QpProblem qp;
    qp.hessian = hessian;
    qp.gradient = gradient;
    qp.eq_jacobian = MatrixXd(0, n);
    qp.eq_values = VectorXd(0);
    qp.ineq_jacobian = MatrixXd(0, n);
    qp.ineq_values = VectorXd(0);
    qp.lower = VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
    qp.upper = VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    return qp;
}

namespace {

// min 0.5 x'Gx + a'x  s.t.  N_e' x = b_e,  N_i' x >= b_i.
// Constraint normals are the columns of `normals`; the first `n_eq` are
// equalities.
struct DualActiveSet {
    DualActiveSet(const MatrixXd& h, const VectorXd& a, const MatrixXd& n, const VectorXd& b, Index eq, int limit)
        : hessian(h), linear(a), normals(n), rhs(b), n_eq(eq), max_iterations(limit)
    {
    }

    const MatrixXd& hessian;
    const VectorXd& linear;
    const MatrixXd& normals;
    const VectorXd& rhs;
    Index n_eq;
    int max_iterations;

    VectorXd x;
    VectorXd multipliers; // per constraint column, zero when inactive
    int iterations = 0;

    enum class Outcome { Optimal, Infeasible, IterationLimit };

    Outcome solve();

private:
    MatrixXd j_;
    MatrixXd r_;
    Index q_ = 0;
    std::vector<Index> active_;
    std::vector<double> u_;

    void add_constraint(VectorXd& d);
    void drop_constraint(Index position);
    VectorXd solve_r(const VectorXd& d) const;
};

VectorXd DualActiveSet::solve_r(const VectorXd& d) const
{
    VectorXd r(q_);
    for (Index i = q_ - 1; i >= 0; --i) {
        double sum = d[i];
        for (Index k = i + 1; k < q_; ++k)
            sum -= r_(i, k) * r[k];
        r[i] = sum / r_(i, i);
    }
    return r;
}

void DualActiveSet::add_constraint(VectorXd& d)
{
    const Index n = d.size();
    for (Index j = n - 1; j > q_; --j) {
        const double a = d[j - 1], b = d[j];
        if (b == 0.0)
            continue;
        const double h = std::hypot(a, b);
        const double c = a / h, s = b / h;
        d[j - 1] = h;
        d[j] = 0.0;
        for (Index k = 0; k < n; ++k) {
            const double jl = j_(k, j - 1), jr = j_(k, j);
            j_(k, j - 1) = c * jl + s * jr;
            j_(k, j) = -s * jl + c * jr;
        }
    }
    for (Index i = 0; i <= q_; ++i)
        r_(i, q_) = d[i];
    ++q_;
}

void DualActiveSet::drop_constraint(Index position)
{
    const Index n = j_.rows();
    for (Index col = position; col < q_ - 1; ++col)
        for (Index row = 0; row < q_; ++row)
            r_(row, col) = r_(row, col + 1);
    for (Index row = 0; row < q_; ++row)
        r_(row, q_ - 1) = 0.0;
    for (Index j = position; j < q_ - 1; ++j) {
        const double a = r_(j, j), b = r_(j + 1, j);
        if (b == 0.0)
            continue;
        const double h = std::hypot(a, b);
        const double c = a / h, s = b / h;
        for (Index k = j; k < q_ - 1; ++k) {
            const double top = r_(j, k), bottom = r_(j + 1, k);
            r_(j, k) = c * top + s * bottom;
            r_(j + 1, k) = -s * top + c * bottom;
        }
        for (Index k = 0; k < n; ++k) {
            const double jl = j_(k, j), jr = j_(k, j + 1);
            j_(k, j) = c * jl + s * jr;
            j_(k, j + 1) = -s * jl + c * jr;
        }
    }
    active_.erase(active_.begin() + position);
    u_.erase(u_.begin() + position);
    --q_;
}

DualActiveSet::Outcome DualActiveSet::solve()
{
    const Index n = hessian.rows();
    const Index m = normals.cols();
    multipliers = VectorXd::Zero(m);

    Eigen::LLT<MatrixXd> llt(hessian);
    MatrixXd shifted;
    if (llt.info() != Eigen::Success) {
        const double scale = std::max(1e-12, hessian.diagonal().cwiseAbs().maxCoeff());
        for (double shift = 1e-10 * scale; llt.info() != Eigen::Success; shift *= 10.0) {
            shifted = hessian + shift * MatrixXd::Identity(n, n);
            llt.compute(shifted);
        }
    }
    const MatrixXd l = llt.matrixL();
    j_ = l.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(n, n));
    r_ = MatrixXd::Zero(n, n);
    x = -llt.solve(linear);

    auto slack = [&](Index i) { return normals.col(i).dot(x) - rhs[i]; };

    for (Index k = 0; k < n_eq; ++k) {
        const VectorXd np = normals.col(k);
        VectorXd d = j_.transpose() * np;
        const VectorXd d2 = d.tail(n - q_);
        if (d2.norm() <= 1e-10 * std::max(1e-300, d.norm())) {
            if (std::abs(slack(k)) > 1e-9 * (1.0 + std::abs(rhs[k])))
                return Outcome::Infeasible;
            continue; // redundant equality
        }
        const VectorXd z = j_.rightCols(n - q_) * d2;
        const VectorXd r = solve_r(d.head(q_));
        const double t = -slack(k) / z.dot(np);
        x += t * z;
        for (Index i = 0; i < q_; ++i)
            u_[static_cast<std::size_t>(i)] -= t * r[i];
        add_constraint(d);
        active_.push_back(k);
        u_.push_back(t);
        ++iterations;
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<bool> is_active(static_cast<std::size_t>(m), false);
    for (Index k : active_)
        is_active[static_cast<std::size_t>(k)] = true;

    while (true) {
        if (iterations >= max_iterations)
            return Outcome::IterationLimit;
        // Most violated inequality, measured along its unit normal.
        Index p = -1;
        double worst = 0.0;
        const double x_scale = x.cwiseAbs().maxCoeff();
        for (Index i = n_eq; i < m; ++i) {
            if (is_active[static_cast<std::size_t>(i)])
                continue;
            const double norm = normals.col(i).norm();
            if (norm == 0.0) {
                if (rhs[i] > 1e-12)
                    return Outcome::Infeasible;
                continue;
            }
            const double s = slack(i);
            const double tol = 1e-11 * (1.0 + std::abs(rhs[i]) + normals.col(i).cwiseAbs().maxCoeff() * x_scale);
            if (s < -tol && s / norm < worst) {
                worst = s / norm;
                p = i;
            }
        }
        if (p < 0)
            break;

        const VectorXd np = normals.col(p);
        double u_p = 0.0;
        while (true) {
            if (++iterations > max_iterations)
                return Outcome::IterationLimit;
            VectorXd d = j_.transpose() * np;
            const VectorXd d2 = d.tail(n - q_);
            const bool primal_step = d2.norm() > 1e-10 * std::max(1e-300, d.norm());
            VectorXd z = primal_step ? VectorXd(j_.rightCols(n - q_) * d2) : VectorXd::Zero(n);
            const VectorXd r = solve_r(d.head(q_));

            double t1 = inf;
            Index drop = -1;
            for (Index i = 0; i < q_; ++i) {
                if (active_[static_cast<std::size_t>(i)] < n_eq || r[i] <= 0.0)
                    continue;
                const double ratio = u_[static_cast<std::size_t>(i)] / r[i];
                if (ratio < t1) {
                    t1 = ratio;
                    drop = i;
                }
            }
            const double t2 = primal_step ? -slack(p) / z.dot(np) : inf;
            const double t = std::min(t1, t2);
            if (t == inf)
                return Outcome::Infeasible;

            for (Index i = 0; i < q_; ++i)
                u_[static_cast<std::size_t>(i)] -= t * r[i];
            u_p += t;
            if (primal_step)
                x += t * z;

            if (primal_step && t2 <= t1) {
                add_constraint(d);
                active_.push_back(p);
                u_.push_back(u_p);
                is_active[static_cast<std::size_t>(p)] = true;
                break;
            }
            is_active[static_cast<std::size_t>(active_[static_cast<std::size_t>(drop)])] = false;
            drop_constraint(drop);
        }
    }

    for (std::size_t i = 0; i < active_.size(); ++i)
        multipliers[active_[i]] = u_[i];
    return Outcome::Optimal;
}

struct Assembled {
    MatrixXd normals;
    VectorXd rhs;
    Index n_eq = 0;
    std::vector<Index> lower_index, upper_index; // column per variable or -1
};

QpResult unpack(const QpProblem& qp, const DualActiveSet& das, const Assembled& as, Index n, QpStatus status)
{
    QpResult out;
    out.status = status;
    out.direction = das.x.head(n);
    out.iterations = das.iterations;
    const Index m_eq = qp.eq_values.size();
    const Index m_in = qp.ineq_values.size();
    out.eq_multipliers = -das.multipliers.head(m_eq);
    out.ineq_multipliers = das.multipliers.segment(m_eq, m_in);
    out.lower_multipliers = VectorXd::Zero(n);
    out.upper_multipliers = VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) {
        if (as.lower_index[static_cast<std::size_t>(i)] >= 0)
            out.lower_multipliers[i] = das.multipliers[as.lower_index[static_cast<std::size_t>(i)]];
        if (as.upper_index[static_cast<std::size_t>(i)] >= 0)
            out.upper_multipliers[i] = das.multipliers[as.upper_index[static_cast<std::size_t>(i)]];
    }
    out.objective = 0.5 * out.direction.dot(qp.hessian * out.direction) + qp.gradient.dot(out.direction);
    return out;
}

// Columns: equalities, general inequalities, lower bounds, upper bounds.
// With `elastic`, an extra last variable t >= 0 relaxes every general row.
Assembled assemble(const QpProblem& qp, bool elastic)
{
    const Index n = qp.gradient.size();
    const Index nv = elastic ? n + 1 : n;
    const Index m_eq = qp.eq_values.size();
    const Index m_in = qp.ineq_values.size();
    Index n_bounds = 0;
    for (Index i = 0; i < n; ++i)
        n_bounds += std::isfinite(qp.lower[i]) + std::isfinite(qp.upper[i]);

    Assembled as;
    const Index cols = elastic ? (2 * m_eq + m_in + n_bounds + 1) : (m_eq + m_in + n_bounds);
    as.normals = MatrixXd::Zero(nv, cols);
    as.rhs = VectorXd::Zero(cols);
    as.lower_index.assign(static_cast<std::size_t>(n), -1);
    as.upper_index.assign(static_cast<std::size_t>(n), -1);
    Index c = 0;
    if (!elastic) {
        as.n_eq = m_eq;
        for (Index i = 0; i < m_eq; ++i, ++c) {
            as.normals.col(c).head(n) = qp.eq_jacobian.row(i).transpose();
            as.rhs[c] = -qp.eq_values[i];
        }
    } else {
        // |A d + h| <= t as two inequalities; the first m_eq columns hold the
        // "A d + h <= t" half so unpack() can read eq multipliers from them.
        as.n_eq = 0;
        for (Index i = 0; i < m_eq; ++i, ++c) {
            as.normals.col(c).head(n) = -qp.eq_jacobian.row(i).transpose();
            as.normals(n, c) = 1.0;
            as.rhs[c] = qp.eq_values[i];
        }
    }
    for (Index i = 0; i < m_in; ++i, ++c) {
        as.normals.col(c).head(n) = -qp.ineq_jacobian.row(i).transpose();
        if (elastic)
            as.normals(n, c) = 1.0;
        as.rhs[c] = qp.ineq_values[i];
    }
    for (Index i = 0; i < n; ++i) {
        if (std::isfinite(qp.lower[i])) {
            as.normals(i, c) = 1.0;
            as.rhs[c] = qp.lower[i];
            as.lower_index[static_cast<std::size_t>(i)] = c++;
        }
        if (std::isfinite(qp.upper[i])) {
            as.normals(i, c) = -1.0;
            as.rhs[c] = -qp.upper[i];
            as.upper_index[static_cast<std::size_t>(i)] = c++;
        }
    }
    if (elastic) {
        for (Index i = 0; i < m_eq; ++i, ++c) {
            as.normals.col(c).head(n) = qp.eq_jacobian.row(i).transpose();
            as.normals(n, c) = 1.0;
            as.rhs[c] = -qp.eq_values[i];
        }
        as.normals(n, c) = 1.0; // t >= 0
        as.rhs[c] = 0.0;
        ++c;
    }
    return as;
}

} // namespace

QpResult solve_qp(const QpProblem& qp, const QpOptions& options)
{
    const Index n = qp.gradient.size();
    if (qp.hessian.rows() != n || qp.hessian.cols() != n || qp.lower.size() != n || qp.upper.size() != n ||
        qp.eq_jacobian.cols() != n || qp.ineq_jacobian.cols() != n ||
        qp.eq_jacobian.rows() != qp.eq_values.size() || qp.ineq_jacobian.rows() != qp.ineq_values.size())
        throw ValidationError("QP dimensions are inconsistent");
    for (Index i = 0; i < n; ++i)
        if (qp.lower[i] > qp.upper[i])
            throw ValidationError("QP bounds are crossed at variable " + std::to_string(i));

    const Index m_total = qp.eq_values.size() + qp.ineq_values.size() + 2 * n;
    const int max_iterations =
        options.max_iterations > 0 ? options.max_iterations : static_cast<int>(10 * (n + m_total) + 50);

    {
        const Assembled as = assemble(qp, false);
        DualActiveSet das(qp.hessian, qp.gradient, as.normals, as.rhs, as.n_eq, max_iterations);
        const auto outcome = das.solve();
        if (outcome == DualActiveSet::Outcome::Optimal)
            return unpack(qp, das, as, n, QpStatus::Optimal);
        if (outcome == DualActiveSet::Outcome::IterationLimit || !options.allow_elastic) {
            QpResult failed;
            failed.status = outcome == DualActiveSet::Outcome::IterationLimit ? QpStatus::Failed : QpStatus::Infeasible;
            failed.direction = VectorXd::Zero(n);
            failed.iterations = das.iterations;
            return failed;
        }
    }

    // Elastic mode: minimise q(d) + rho t + 0.5 eps t^2 with every general row
    // relaxed by t.
    const double diag_scale = std::max(1e-8, qp.hessian.diagonal().cwiseAbs().mean());
    MatrixXd h_ext = MatrixXd::Zero(n + 1, n + 1);
    h_ext.topLeftCorner(n, n) = qp.hessian;
    h_ext(n, n) = 1e-6 * diag_scale;
    VectorXd g_ext(n + 1);
    g_ext.head(n) = qp.gradient;
    g_ext[n] = options.elastic_penalty;
    const Assembled as = assemble(qp, true);
    DualActiveSet das(h_ext, g_ext, as.normals, as.rhs, as.n_eq, max_iterations);
    const auto outcome = das.solve();
    QpResult out;
    if (outcome != DualActiveSet::Outcome::Optimal) {
        out.status = QpStatus::Failed;
        out.direction = VectorXd::Zero(n);
        out.iterations = das.iterations;
        return out;
    }
    out = unpack(qp, das, as, n, QpStatus::Relaxed);
    out.elastic_slack = das.x[n];
    const Index m_eq = qp.eq_values.size();
    Index c = m_eq + qp.ineq_values.size();
    for (Index i = 0; i < n; ++i)
        c += std::isfinite(qp.lower[i]) + std::isfinite(qp.upper[i]);
    for (Index i = 0; i < m_eq; ++i)
        out.eq_multipliers[i] = das.multipliers[i] - das.multipliers[c + i];
    return out;
}

} // namespace mgd
