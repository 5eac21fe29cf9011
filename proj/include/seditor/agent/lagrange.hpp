#pragma once

#include <vector>

namespace seditor::agent {

// Estimate of the dual-variable gradient: mean raw constraint reward of
// the fresh rollout batch plus the per-step budget c. Negative while the
// policy violates more than the budget allows (pushes the multiplier
// up), positive when safely under it. Raw, unnormalized constraint
// rewards on purpose: the budget is stated in raw units.
double lambda_estimate(const std::vector<double>& rc_raw, double c);

// Nonnegative multiplier parameterized as lambda = softplus(lambda0),
// trained by unconstrained descent on softplus(lambda0) * lambda_hat.
class LagrangeState {
 public:
  // initial_lambda is the multiplier value itself; lambda0 is recovered
  // through the softplus inverse. initial_lambda = 0 is mapped to a
  // lambda0 deep enough in the tail that softplus underflows to an
  // exact 0.0.
  LagrangeState(double initial_lambda, double lr);

  double multiplier() const;  // softplus(lambda0)
  double raw() const { return lambda0_; }
  void set_raw(double lambda0) { lambda0_ = lambda0; }
  double lr() const { return lr_; }

  // Exact gradient step lambda0 -= lr * sigmoid(lambda0) * lambda_hat.
  // simple_rule drops the sigmoid chain factor, useful for comparing
  // against the plain rule some implementations use.
  void step(double lambda_hat, bool simple_rule = false);

 private:
  double lambda0_ = 0.0;
  double lr_ = 0.0;
};

}  // namespace seditor::agent
