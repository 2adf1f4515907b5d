#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "generators.hpp"
#include "mgd/ahp.hpp"
#include "mgd/errors.hpp"

using namespace mgd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Random reciprocal matrix on the 1-9 scale.
MatrixXd random_reciprocal(gen::Rng& rng, long n)
{
    MatrixXd m = MatrixXd::Ones(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) {
            const double v = rng.integer(1, 9);
            m(i, j) = rng.coin() ? v : 1.0 / v;
            m(j, i) = 1.0 / m(i, j);
        }
    return m;
}

} // namespace

TEST_CASE("ahp: all-ones matrix gives equal weights")
{
    const auto r = derive_weights(ComparisonMatrix(MatrixXd::Ones(4, 4)));
    for (long i = 0; i < 4; ++i)
        CHECK(r.weights[i] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(r.consistency_ratio) < 1e-12);
}

TEST_CASE("ahp: consistent matrix from target weights")
{
    const VectorXd w = (VectorXd(4) << 0.157, 0.483, 0.272, 0.088).finished();
    const auto r = derive_weights(ComparisonMatrix::from_weights(w));
    CHECK((r.weights - w).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(std::abs(r.consistency_ratio) < 1e-8);
    CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ahp: shipped judgment matrix")
{
    const auto r = derive_weights(default_judgment_matrix());
    const double target[] = {0.157, 0.483, 0.272, 0.088};
    for (long i = 0; i < 4; ++i)
        CHECK(std::abs(r.weights[i] - target[i]) <= 0.02);
    CHECK(r.acceptable());
    CHECK(random_index(4) == doctest::Approx(0.90));
}

TEST_CASE("ahp: any consistent matrix has zero inconsistency")
{
    gen::Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const long n = rng.integer(2, 9);
        VectorXd w = rng.vector(n, 0.05, 1.0);
        const auto m = ComparisonMatrix::from_weights(w);
        const auto r = derive_weights(m);
        CHECK(std::abs(r.consistency_ratio) < 1e-8);
        // Every column normalised equals the weights.
        const long col = rng.integer(0, static_cast<int>(n) - 1);
        const VectorXd c = m.entries().col(col) / m.entries().col(col).sum();
        CHECK((r.weights - c).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("ahp: permuting criteria permutes the weights")
{
    gen::Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const long n = rng.integer(2, 8);
        const MatrixXd m = random_reciprocal(rng, n);
        std::vector<long> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0L);
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        MatrixXd p(n, n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                p(i, j) = m(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        const auto a = derive_weights(ComparisonMatrix(m));
        const auto b = derive_weights(ComparisonMatrix(p));
        for (long i = 0; i < n; ++i)
            CHECK(std::abs(b.weights[i] - a.weights[perm[static_cast<std::size_t>(i)]]) < 1e-8);
        CHECK(b.consistency_ratio == doctest::Approx(a.consistency_ratio).epsilon(1e-8));
        CHECK(a.consistency_ratio >= -1e-12);
    }
}

TEST_CASE("ahp: malformed matrices are rejected")
{
    MatrixXd m = MatrixXd::Ones(3, 3);
    m(0, 1) = 3.0;
    CHECK_THROWS_AS(ComparisonMatrix{m}, ValidationError);
    CHECK_THROWS_AS(ComparisonMatrix{MatrixXd::Ones(1, 1)}, ValidationError);
    CHECK_THROWS_AS(ComparisonMatrix::from_rows({{1.0, 2.0}, {0.5}}), ValidationError);
    MatrixXd negative = MatrixXd::Ones(2, 2);
    negative(0, 1) = -1.0;
    negative(1, 0) = -1.0;
    CHECK_THROWS_AS(ComparisonMatrix{negative}, ValidationError);
}
