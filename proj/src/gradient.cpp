#include "mgd/gradient.hpp"

#include <cmath>
#include <vector>

#include "mgd/parallel.hpp"

namespace mgd {

Eigen::VectorXd gradient(const ScalarFunction& f, const Eigen::VectorXd& x, double relative_step, std::size_t threads)
{
    const Eigen::Index n = x.size();
    Eigen::VectorXd g(n);
    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t k) {
            const auto i = static_cast<Eigen::Index>(k);
            const double h = fd_step(x[i], relative_step);
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            g[i] = (f(xp) - f(xm)) / (2.0 * h);
        },
        threads);
    return g;
}

Eigen::VectorXd forward_gradient(const ScalarFunction& f, const Eigen::VectorXd& x, double relative_step)
{
    const double f0 = f(x);
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = fd_step(x[i], relative_step);
        Eigen::VectorXd xp = x;
        xp[i] += h;
        g[i] = (f(xp) - f0) / h;
    }
    return g;
}

Eigen::MatrixXd jacobian(const VectorFunction& f, const Eigen::VectorXd& x, double relative_step, std::size_t threads)
{
    const Eigen::Index n = x.size();
    std::vector<Eigen::VectorXd> columns(static_cast<std::size_t>(n));
    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t k) {
            const auto i = static_cast<Eigen::Index>(k);
            const double h = fd_step(x[i], relative_step);
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            columns[k] = (f(xp) - f(xm)) / (2.0 * h);
        },
        threads);
    const Eigen::Index m = n > 0 ? columns[0].size() : f(x).size();
    Eigen::MatrixXd jac(m, n);
    for (Eigen::Index i = 0; i < n; ++i)
        jac.col(i) = columns[static_cast<std::size_t>(i)];
    return jac;
}

} // namespace mgd
