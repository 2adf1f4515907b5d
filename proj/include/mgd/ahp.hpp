#pragma once

#include <vector>

#include <Eigen/Core>

namespace mgd {

// Reciprocal pairwise-comparison matrix (Saaty scale).
class ComparisonMatrix {
public:
    explicit ComparisonMatrix(Eigen::MatrixXd entries);
    static ComparisonMatrix from_rows(const std::vector<std::vector<double>>& rows);
    // a_ij = w_i / w_j: perfectly consistent by construction.
    static ComparisonMatrix from_weights(const Eigen::VectorXd& weights);

    const Eigen::MatrixXd& entries() const { return entries_; }
    Eigen::Index size() const { return entries_.rows(); }

private:
    Eigen::MatrixXd entries_;
};

struct AhpResult {
    Eigen::VectorXd weights; // sums to 1
    double lambda_max = 0.0;
    double consistency_index = 0.0;
    double consistency_ratio = 0.0;
    int iterations = 0;
    bool acceptable() const { return consistency_ratio <= 0.1; }
};

// Saaty random index for matrices of order n (n <= 15).
double random_index(Eigen::Index n);

// Principal eigenvector by power iteration. CR above 0.1 is logged, not
// rejected.
AhpResult derive_weights(const ComparisonMatrix& matrix, double tolerance = 1e-10, int max_iterations = 10000);

// Judgment matrix shipped with the benchmark (cost, loss, unsupplied energy,
// voltage deviation).
ComparisonMatrix default_judgment_matrix();

} // namespace mgd
