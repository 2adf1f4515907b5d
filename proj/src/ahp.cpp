#include "mgd/ahp.hpp"

#include <array>
#include <cmath>

#include "mgd/errors.hpp"
#include "mgd/format.hpp"
#include "mgd/log.hpp"

namespace mgd {

ComparisonMatrix::ComparisonMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries))
{
    const Eigen::Index n = entries_.rows();
    if (n < 2 || entries_.cols() != n)
        throw ValidationError("comparison matrix must be square with order >= 2");
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double a = entries_(i, j);
            if (!std::isfinite(a) || a <= 0.0)
                throw ValidationError("comparison matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") must be positive");
            if (std::abs(a * entries_(j, i) - 1.0) > 1e-9)
                throw ValidationError("comparison matrix is not reciprocal at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
    }
}

ComparisonMatrix ComparisonMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n)
            throw ValidationError("comparison matrix must be square");
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = rows[i][j];
    }
    return ComparisonMatrix(m);
}

ComparisonMatrix ComparisonMatrix::from_weights(const Eigen::VectorXd& weights)
{
    const Eigen::Index n = weights.size();
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = weights[i] / weights[j];
    return ComparisonMatrix(m);
}

double random_index(Eigen::Index n)
{
    static constexpr std::array<double, 16> table{0.0,  0.0,  0.0,  0.58, 0.90, 1.12, 1.24, 1.32,
                                                  1.41, 1.45, 1.49, 1.51, 1.48, 1.56, 1.57, 1.59};
    if (n < 1 || n >= static_cast<Eigen::Index>(table.size()))
        throw ValidationError("no random index tabulated for order " + std::to_string(n));
    return table[static_cast<std::size_t>(n)];
}

AhpResult derive_weights(const ComparisonMatrix& matrix, double tolerance, int max_iterations)
{
    const Eigen::MatrixXd& a = matrix.entries();
    const Eigen::Index n = matrix.size();
    AhpResult result;
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (int it = 1; it <= max_iterations; ++it) {
        Eigen::VectorXd next = a * w;
        next /= next.sum();
        const double change = (next - w).cwiseAbs().maxCoeff();
        w = next;
        result.iterations = it;
        if (change < tolerance)
            break;
    }
    result.weights = w;
    result.lambda_max = ((a * w).array() / w.array()).mean();
    result.consistency_index = std::max(0.0, (result.lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1));
    const double ri = random_index(n);
    result.consistency_ratio = ri > 0.0 ? result.consistency_index / ri : 0.0;
    if (!result.acceptable())
        log_warning("AHP consistency ratio " + fmt_num(result.consistency_ratio) + " exceeds 0.1");
    return result;
}

ComparisonMatrix default_judgment_matrix()
{
    return ComparisonMatrix::from_rows({
        {1.0, 1.0 / 3.0, 1.0 / 2.0, 2.0},
        {3.0, 1.0, 2.0, 5.0},
        {2.0, 1.0 / 2.0, 1.0, 3.0},
        {1.0 / 2.0, 1.0 / 5.0, 1.0 / 3.0, 1.0},
    });
}

} // namespace mgd
