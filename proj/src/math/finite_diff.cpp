#include "seditor/math/finite_diff.hpp"

#include "seditor/util/error.hpp"

namespace seditor::math {

Eigen::VectorXd finite_diff_grad(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& x, double eps) {
  if (!(eps > 0.0)) throw NumericError("finite_diff_grad requires eps > 0");
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + eps;
    const double hi = fn(probe);
    probe(i) = x(i) - eps;
    const double lo = fn(probe);
    probe(i) = x(i);
    grad(i) = (hi - lo) / (2.0 * eps);
  }
  return grad;
}

}  // namespace seditor::math
