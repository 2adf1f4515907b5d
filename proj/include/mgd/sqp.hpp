#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mgd/qp.hpp"

namespace mgd {

// Objective and constraint values at one point. Constraints are h(x) = 0 and
// g(x) <= 0; they are expected to be normalised so tol_feas is meaningful.
struct NlpPoint {
    double objective = 0.0;
    Eigen::VectorXd eq;
    Eigen::VectorXd ineq;
};

struct Nlp {
    std::function<NlpPoint(const Eigen::VectorXd&)> evaluate;
    Eigen::VectorXd lower; // may hold -inf
    Eigen::VectorXd upper; // may hold +inf
};

struct SqpOptions {
    double tol_kkt = 1e-4;
    double tol_feas = 1e-6;
    int max_iterations = 200;
    double fd_relative_step = 1e-5;
    double alpha_min = 1.0 / 1048576.0; // 2^-20
    double armijo = 1e-4;
    double penalty_margin = 1e-2;
    bool scale_objective = true;
    std::size_t threads = 1;
    QpOptions qp;
};

enum class SqpStatus {
    Converged,
    MaxIterations,
    Stalled,  // line search reached alpha_min
    QpFailed, // subproblem failed even in elastic mode
};

const char* to_string(SqpStatus status);

// Damped BFGS approximation, multipliers and merit penalty of the current
// iterate.
struct SqpState {
    Eigen::VectorXd x;
    Eigen::MatrixXd hessian_approx;
    Eigen::VectorXd eq_multipliers;
    Eigen::VectorXd ineq_multipliers;
    double merit_penalty = 0.0;
    int iteration = 0;
    double kkt_residual = 0.0;
};

struct SqpTraceRow {
    int iteration = 0;
    double objective = 0.0;
    double merit = 0.0;          // at the iterate, with this row's penalty
    double accepted_merit = 0.0; // at the accepted trial point, same penalty
    double kkt_residual = 0.0;
    double violation = 0.0;
    double step_norm = 0.0;
    double alpha = 0.0;
    QpStatus qp_status = QpStatus::Optimal;
};

struct SqpResult {
    Eigen::VectorXd x;         // best feasible iterate, or least infeasible if none
    NlpPoint point;            // values at x
    double violation = 0.0;    // max-norm constraint violation at x
    bool feasible = false;
    SqpStatus status = SqpStatus::MaxIterations;
    bool used_elastic = false;
    int iterations = 0;        // accepted steps
    int evaluations = 0;
    SqpState state;            // final iterate (not necessarily x)
    std::vector<SqpTraceRow> trace;
};

// Max-norm violation of h = 0 and g <= 0.
double constraint_violation(const NlpPoint& point);

// Line-search SQP: quadratic subproblems on a damped BFGS model of the
// Lagrangian, l1 exact-penalty merit with backtracking, central-difference
// derivatives. Variables with equal bounds are held fixed; variables with a
// finite box are rescaled to [0, 1] internally.
SqpResult sqp_solve(const Nlp& nlp, const Eigen::VectorXd& x0, const SqpOptions& options = {});

} // namespace mgd
