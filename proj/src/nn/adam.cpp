#include "seditor/nn/adam.hpp"

#include <cmath>

#include "seditor/util/error.hpp"

namespace seditor::nn {

void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad, double lr) {
  if (params.size() != state.m.size() || grad.size() != state.m.size()) {
    throw DimensionError("adam_step: size mismatch");
  }
  if (!grad.allFinite()) {
    throw NumericError("adam_step: non-finite gradient");
  }
  state.t += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v +
            (1.0 - state.beta2) * grad.array().square().matrix();
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  params.array() -=
      lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + state.eps);
}

void adam_step(AdamState& state, Mlp& net, const Eigen::VectorXd& grad,
               double lr) {
  adam_step(state, net.storage(), grad, lr);
}

}  // namespace seditor::nn
