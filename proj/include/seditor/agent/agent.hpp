#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "seditor/agent/modes.hpp"
#include "seditor/dist/head.hpp"
#include "seditor/math/rng.hpp"
#include "seditor/util/checkpoint.hpp"

namespace seditor::agent {

// Replay minibatch in training form: rewards already normalized, and
// discount(j) is the full bootstrap multiplier for sample j — 0 on true
// terminals, gamma on ordinary/timeout steps, gamma^n for n-step
// chains — so every TD target is r + discount * q_next.
struct TrainBatch {
  Eigen::MatrixXd obs;
  Eigen::MatrixXd act;
  Eigen::MatrixXd next_obs;
  Eigen::VectorXd r;
  Eigen::VectorXd rc;
  Eigen::ArrayXd discount;
};

struct UpdateStats {
  double q_loss = 0.0;
  double qc_loss = 0.0;
  double um_objective = 0.0;
  double se_objective = 0.0;
  // Update phases in execution order, for order-contract checks.
  std::vector<std::string> stages;
};

struct AgentConfig {
  int obs_dim = 0;
  int act_dim = 0;
  double action_bound = 1.0;
  dist::HeadKind head_kind = dist::HeadKind::kBeta;
  double min_concentration = 1.0;
  std::vector<int> actor_hidden;
  std::vector<int> critic_hidden;
  double lr = 3e-4;
  double gamma = 0.99;
  double tau = 5e-3;
  double lr_lambda = 0.01;
  double initial_lambda = 1.0;
  bool simple_lambda_rule = false;
  double entropy_target_um = -1.609;  // nats per action dimension
  double entropy_target_se = -1.609;
  EditMode edit_mode = EditMode::kAdditive;
  DistanceMode distance_mode = DistanceMode::kHinge;
  bool twin_q = false;
  bool lagrangian = true;  // single-policy baselines only
  std::uint64_t init_seed = 0;
};

// A constrained off-policy agent: explores, evaluates deterministically,
// adjusts its dual variable from fresh rollout constraint rewards, and
// takes one full gradient iteration per call.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual Eigen::VectorXd act(const Eigen::VectorXd& obs,
                              math::Rng& rng) const = 0;
  virtual Eigen::VectorXd act_greedy(const Eigen::VectorXd& obs) const = 0;

  // Dual update from the raw constraint rewards of the latest rollout.
  virtual void multiplier_step(const std::vector<double>& rc_raw,
                               double budget) = 0;

  // One critic + policy + entropy + target-sync sweep.
  virtual UpdateStats gradient_step(const TrainBatch& batch,
                                    math::Rng& rng) = 0;

  virtual double lambda_value() const = 0;
  virtual double alpha_um() const = 0;
  virtual double alpha_se() const = 0;

  virtual void save(util::CheckpointWriter& w) const = 0;
  virtual void load(const util::CheckpointReader& r) = 0;
};

// kind: seditor | sac | sac_lag (cfg.lagrangian is set from the kind).
std::unique_ptr<Agent> make_agent(const std::string& kind, AgentConfig cfg);

}  // namespace seditor::agent
