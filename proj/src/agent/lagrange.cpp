#include "seditor/agent/lagrange.hpp"

#include <cmath>

#include "seditor/math/scalar.hpp"
#include "seditor/util/error.hpp"

namespace seditor::agent {

double lambda_estimate(const std::vector<double>& rc_raw, double c) {
  if (rc_raw.empty()) throw Error("lambda_estimate: empty rollout batch");
  double sum = 0.0;
  for (double v : rc_raw) sum += v;
  return sum / static_cast<double>(rc_raw.size()) + c;
}

LagrangeState::LagrangeState(double initial_lambda, double lr) : lr_(lr) {
  if (initial_lambda < 0.0) throw ConfigError("initial_lambda must be >= 0");
  if (lr < 0.0) throw ConfigError("lr_lambda must be >= 0");
  // exp(-1e9) underflows, so softplus returns exactly 0.0 here.
  lambda0_ = initial_lambda == 0.0 ? -1e9 : math::softplus_inv(initial_lambda);
}

double LagrangeState::multiplier() const { return math::softplus(lambda0_); }

void LagrangeState::step(double lambda_hat, bool simple_rule) {
  if (!std::isfinite(lambda_hat)) {
    throw NumericError("lambda step: estimate is not finite");
  }
  const double grad =
      simple_rule ? lambda_hat : math::sigmoid(lambda0_) * lambda_hat;
  lambda0_ -= lr_ * grad;
}

}  // namespace seditor::agent
