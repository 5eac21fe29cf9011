#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

namespace seditor::env {

struct EnvSpec {
  int obs_dim = 0;
  int act_dim = 0;
  double action_bound = 1.0;
  int horizon = 1;
};

// One transition. `terminal` marks a real MDP termination (bootstrapping
// stops there), `timeout` marks the horizon cut (bootstrapping continues
// because the episode was truncated, not finished). `obs` is the true
// successor observation even when the episode ended; resets are the
// caller's job.
struct StepResult {
  Eigen::VectorXd obs;
  double reward = 0.0;
  double constraint_reward = 0.0;  // 0 when safe, -1 per violation
  bool terminal = false;
  bool timeout = false;
  bool success = false;
};

// Episodic CMDP with a scalar utility reward and a scalar constraint
// reward. Implementations must be exactly reproducible from the reset
// seed and must expose their full state for checkpointing.
class CmdpEnv {
 public:
  virtual ~CmdpEnv() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Eigen::VectorXd reset(std::uint64_t seed) = 0;
  virtual StepResult step(const Eigen::VectorXd& action) = 0;

  // Full mutable state as doubles, for bit-exact save/resume.
  virtual std::vector<double> state() const = 0;
  virtual void restore(const std::vector<double>& state) = 0;
};

}  // namespace seditor::env
