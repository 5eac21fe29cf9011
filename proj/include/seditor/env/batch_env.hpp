#pragma once

#include <functional>
#include <memory>

#include "seditor/env/env.hpp"

namespace seditor::env {

// Fixed-size fleet of independent environment instances stepped in
// lockstep. Finished instances (terminal or timeout) are reset
// automatically before the next call; the StepResult still carries the
// true final observation while observations() already shows the fresh
// reset. Episode seeds derive from (master_seed, instance, episode
// index), so trajectories are reproducible regardless of how episodes
// interleave. Stepping is sequential in instance order.
class BatchEnv {
 public:
  using Factory = std::function<std::unique_ptr<CmdpEnv>()>;

  BatchEnv(const Factory& factory, int instances, std::uint64_t master_seed);

  int size() const { return static_cast<int>(envs_.size()); }
  const EnvSpec& spec() const { return envs_.front()->spec(); }

  // obs_dim x instances, the observations the policy should act on.
  const Eigen::MatrixXd& observations() const { return obs_; }

  // actions: act_dim x instances.
  std::vector<StepResult> step(const Eigen::MatrixXd& actions);

  std::vector<double> state() const;
  void restore(const std::vector<double>& state);

 private:
  std::uint64_t episode_seed(int instance, long episode) const;

  std::uint64_t master_seed_;
  std::vector<std::unique_ptr<CmdpEnv>> envs_;
  std::vector<long> episode_;  // per-instance episode index
  Eigen::MatrixXd obs_;
};

}  // namespace seditor::env
