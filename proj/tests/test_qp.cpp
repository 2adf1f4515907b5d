#include <doctest.h>

#include <chrono>
#include <limits>

#include "generators.hpp"
#include "qp_instances.hpp"
#include "mgd/qp.hpp"
#include "oracles/active_set_enum.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

using namespace qpgen;

TEST_CASE("qp: identity hessian without constraints gives the negative gradient")
{
    const VectorXd g = (VectorXd(3) << 1.0, -2.0, 0.5).finished();
    const auto res = mgd::solve_qp(mgd::QpProblem::unconstrained(MatrixXd::Identity(3, 3), g));
    CHECK(res.status == mgd::QpStatus::Optimal);
    CHECK((res.direction + g).norm() < 1e-14);
}

TEST_CASE("qp: single equality with identity hessian")
{
    // min 0.5|d|^2 + g'd  s.t. a'd = b  ->  d = -g + a (b + a'g) / a'a
    const VectorXd g = (VectorXd(3) << 1.0, 2.0, -1.0).finished();
    const VectorXd a = (VectorXd(3) << 1.0, 1.0, 2.0).finished();
    const double b = 0.7;
    auto qp = mgd::QpProblem::unconstrained(MatrixXd::Identity(3, 3), g);
    qp.eq_jacobian = a.transpose();
    qp.eq_values = VectorXd::Constant(1, -b);
    const auto res = mgd::solve_qp(qp);
    const VectorXd expected = -g + a * (b + a.dot(g)) / a.squaredNorm();
    CHECK((res.direction - expected).norm() < 1e-12);
    CHECK(kkt_error(qp, res) < 1e-12);
}

TEST_CASE("qp: box bounds clip the unconstrained step")
{
    auto qp = mgd::QpProblem::unconstrained(MatrixXd::Identity(2, 2), (VectorXd(2) << -5.0, 5.0).finished());
    qp.lower = VectorXd::Constant(2, -1.0);
    qp.upper = VectorXd::Constant(2, 1.0);
    const auto res = mgd::solve_qp(qp);
    CHECK(res.direction[0] == doctest::Approx(1.0));
    CHECK(res.direction[1] == doctest::Approx(-1.0));
    CHECK(res.upper_multipliers[0] == doctest::Approx(4.0));
    CHECK(res.lower_multipliers[1] == doctest::Approx(4.0));
}

TEST_CASE("qp: inconsistent linearisation falls back to the elastic problem")
{
    // d >= 1 and d <= -1 written as general rows.
    auto qp = mgd::QpProblem::unconstrained(MatrixXd::Identity(1, 1), VectorXd::Zero(1));
    qp.ineq_jacobian = (MatrixXd(2, 1) << -1.0, 1.0).finished();
    qp.ineq_values = (VectorXd(2) << 1.0, 1.0).finished();
    const auto res = mgd::solve_qp(qp);
    CHECK(res.status == mgd::QpStatus::Relaxed);
    CHECK(res.elastic_slack == doctest::Approx(1.0).epsilon(1e-6));

    mgd::QpOptions strict;
    strict.allow_elastic = false;
    CHECK(mgd::solve_qp(qp, strict).status == mgd::QpStatus::Infeasible);
}

TEST_CASE("qp: random instances match exhaustive active-set enumeration")
{
    gen::Rng rng(20240611);
    int compared = 0;
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 200; ++trial) {
        const RandomQp r = random_qp(rng);
        const auto res = mgd::solve_qp(r.qp);
        const auto ref = oracle::enumerate_active_sets(r.qp.hessian, r.qp.gradient, r.e_rows, r.e, r.c_rows, r.c);
        REQUIRE(ref.has_value());
        CAPTURE(trial);
        REQUIRE(res.status == mgd::QpStatus::Optimal);
        CHECK((res.direction - ref->x).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(kkt_error(r.qp, res) < 1e-8);
        ++compared;
    }
    CHECK(compared == 200);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
}
