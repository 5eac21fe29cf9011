#pragma once

#include "seditor/env/env.hpp"

namespace seditor::env {

// Single-step constrained bandit on the action interval [-1, 1].
// Utility reward equals the action; actions above 0.5 cost one unit of
// constraint reward. The unconstrained optimum is a = 1, the constrained
// optimum under a small budget sits just below the 0.5 threshold, which
// makes the gap between a safe and an unsafe policy easy to measure.
class BanditEnv : public CmdpEnv {
 public:
  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(std::uint64_t seed) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::vector<double> state() const override { return {}; }
  void restore(const std::vector<double>& state) override;

 private:
  EnvSpec spec_{1, 1, 1.0, 1};
};

}  // namespace seditor::env
