#pragma once

// Brute-force QP reference: tries every active set, solves the equality
// constrained KKT system and keeps the primal/dual feasible point with the
// lowest objective. Only usable for a handful of constraints.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct QpSolution {
    Eigen::VectorXd x;
    double objective;
};

// min 0.5 x'Hx + g'x  s.t.  E x = e,  C x <= c
inline std::optional<QpSolution> enumerate_active_sets(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                                                       const Eigen::MatrixXd& E, const Eigen::VectorXd& e,
                                                       const Eigen::MatrixXd& C, const Eigen::VectorXd& c)
{
    const long n = g.size(), me = e.size(), mi = c.size();
    std::optional<QpSolution> best;
    for (long mask = 0; mask < (1L << mi); ++mask) {
        std::vector<long> act;
        for (long i = 0; i < mi; ++i)
            if (mask & (1L << i))
                act.push_back(i);
        const long k = me + static_cast<long>(act.size());
        if (k > n)
            continue;
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
        Eigen::VectorXd rhs(n + k);
        kkt.topLeftCorner(n, n) = H;
        rhs.head(n) = -g;
        for (long r = 0; r < me; ++r) {
            kkt.block(n + r, 0, 1, n) = E.row(r);
            kkt.block(0, n + r, n, 1) = E.row(r).transpose();
            rhs[n + r] = e[r];
        }
        for (std::size_t a = 0; a < act.size(); ++a) {
            const long r = me + static_cast<long>(a);
            kkt.block(n + r, 0, 1, n) = C.row(act[a]);
            kkt.block(0, n + r, n, 1) = C.row(act[a]).transpose();
            rhs[n + r] = c[act[a]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (lu.rank() < n + k)
            continue;
        const Eigen::VectorXd sol = lu.solve(rhs);
        const Eigen::VectorXd x = sol.head(n);
        bool ok = true;
        // Solves H x + g + E'l + C_A'm = 0; the inequality part m must be >= 0.
        for (std::size_t a = 0; a < act.size(); ++a)
            if (sol[n + me + static_cast<long>(a)] < -1e-10)
                ok = false;
        for (long i = 0; i < mi && ok; ++i)
            if (C.row(i).dot(x) > c[i] + 1e-9)
                ok = false;
        if (!ok)
            continue;
        const double f = 0.5 * x.dot(H * x) + g.dot(x);
        if (!best || f < best->objective)
            best = QpSolution{x, f};
    }
    return best;
}

} // namespace oracle
