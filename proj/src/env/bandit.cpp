#include "seditor/env/bandit.hpp"

#include "seditor/util/error.hpp"

namespace seditor::env {

Eigen::VectorXd BanditEnv::reset(std::uint64_t /*seed*/) {
  return Eigen::VectorXd::Zero(1);
}

StepResult BanditEnv::step(const Eigen::VectorXd& action) {
  if (action.size() != 1) throw DimensionError("BanditEnv: action size must be 1");
  StepResult r;
  r.obs = Eigen::VectorXd::Zero(1);
  r.reward = action(0);
  r.constraint_reward = action(0) > 0.5 ? -1.0 : 0.0;
  // Every step ends an episode; this is a real termination, not a
  // horizon cut, so successor values are never bootstrapped.
  r.terminal = true;
  r.timeout = false;
  r.success = false;
  return r;
}

void BanditEnv::restore(const std::vector<double>& state) {
  if (!state.empty()) throw CheckpointError("BanditEnv: expected empty state");
}

}  // namespace seditor::env
