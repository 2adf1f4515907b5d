#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Core>

namespace mgd {

using ScalarFunction = std::function<double(const Eigen::VectorXd&)>;
using VectorFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Per-coordinate step used by the finite-difference routines.
inline double fd_step(double x, double relative_step) { return relative_step * std::max(1.0, std::abs(x)); }

// Central differences, h_i = relative_step * max(1, |x_i|).
Eigen::VectorXd gradient(const ScalarFunction& f, const Eigen::VectorXd& x, double relative_step = 1e-5,
                         std::size_t threads = 1);

// One-sided (forward) differences with the same step rule.
Eigen::VectorXd forward_gradient(const ScalarFunction& f, const Eigen::VectorXd& x, double relative_step = 1e-5);

// Central-difference Jacobian, rows = outputs.
Eigen::MatrixXd jacobian(const VectorFunction& f, const Eigen::VectorXd& x, double relative_step = 1e-5,
                         std::size_t threads = 1);

} // namespace mgd
