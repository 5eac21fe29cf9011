#pragma once

#include <Eigen/Dense>

#include "seditor/nn/mlp.hpp"

namespace seditor::nn {

// Adam with bias correction. First/second moment buffers plus the step
// counter are all the state, so checkpointing an optimizer is three
// arrays.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  explicit AdamState(Eigen::Index n)
      : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

// Descent step: params -= lr * m_hat / (sqrt(v_hat) + eps).
// Callers maximizing an objective pass the negated gradient.
// Throws NumericError if grad contains non-finite entries.
void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad, double lr);

// Same step applied to a network's flat parameter vector.
void adam_step(AdamState& state, Mlp& net, const Eigen::VectorXd& grad,
               double lr);

}  // namespace seditor::nn
