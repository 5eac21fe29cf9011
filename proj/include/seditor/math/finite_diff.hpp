#pragma once

#include <Eigen/Dense>
#include <functional>

namespace seditor::math {

// Central-difference gradient of a scalar function, the reference oracle
// for every analytic gradient in the project. One (f(x + eps e_i) -
// f(x - eps e_i)) / (2 eps) evaluation per coordinate, so cost is
// 2 * dim(x) calls; fine for the network sizes checked in tests.
Eigen::VectorXd finite_diff_grad(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& x, double eps);

}  // namespace seditor::math
