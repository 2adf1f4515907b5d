#pragma once

#include <Eigen/Core>

namespace mgd {

// Dense convex QP in the form produced by one SQP linearisation:
//
//   minimise    0.5 d'Hd + g'd
//   subject to  A d + h  = 0        (eq_jacobian, eq_values)
//               G d + c <= 0        (ineq_jacobian, ineq_values)
//               lower <= d <= upper (entries may be +-inf)
struct QpProblem {
    Eigen::MatrixXd hessian;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd eq_jacobian;
    Eigen::VectorXd eq_values;
    Eigen::MatrixXd ineq_jacobian;
    Eigen::VectorXd ineq_values;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    // Convenience: an unconstrained problem of dimension n.
    static QpProblem unconstrained(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& gradient);
};

enum class QpStatus {
    Optimal,
    Relaxed,    // linearisation was inconsistent; solved the elastic problem instead
    Infeasible, // elastic mode disabled and the constraints are inconsistent
    Failed,     // iteration limit
};

const char* to_string(QpStatus status);

struct QpOptions {
    bool allow_elastic = true;
    double elastic_penalty = 1e4;
    int max_iterations = 0; // 0 = 10 * (n + constraints)
};

// Multipliers follow the Lagrangian
//   L = q(d) + eq'(A d + h) + ineq'(G d + c) - lower'(d - l) + upper'(d - u)
// so that at the solution H d + g + A'eq + G'ineq - lower + upper = 0 with the
// inequality and bound multipliers non-negative.
struct QpResult {
    QpStatus status = QpStatus::Failed;
    Eigen::VectorXd direction;
    Eigen::VectorXd eq_multipliers;
    Eigen::VectorXd ineq_multipliers;
    Eigen::VectorXd lower_multipliers;
    Eigen::VectorXd upper_multipliers;
    double objective = 0.0;
    double elastic_slack = 0.0;
    int iterations = 0;
};

// Goldfarb-Idnani dual active-set method. H must be symmetric positive
// definite (a small diagonal shift is applied if the factorisation fails).
QpResult solve_qp(const QpProblem& problem, const QpOptions& options = {});

} // namespace mgd
