#pragma once

#include "seditor/agent/agent.hpp"
#include "seditor/agent/critics.hpp"
#include "seditor/agent/entropy_tuner.hpp"
#include "seditor/agent/lagrange.hpp"
#include "seditor/agent/ops.hpp"
#include "seditor/nn/adam.hpp"

namespace seditor::agent {

// Single-policy baseline. With the lagrangian flag the actor maximizes
// Q + lambda * Qc and the multiplier follows the shared dual update;
// without it lambda is pinned to exactly 0.0 and never touched, which
// reduces the objective to plain SAC while running the identical code
// path (the two variants are bit-identical when lambda stays 0).
class SacAgent : public Agent {
 public:
  explicit SacAgent(const AgentConfig& cfg);

  Eigen::VectorXd act(const Eigen::VectorXd& obs,
                      math::Rng& rng) const override;
  Eigen::VectorXd act_greedy(const Eigen::VectorXd& obs) const override;
  void multiplier_step(const std::vector<double>& rc_raw,
                       double budget) override;
  UpdateStats gradient_step(const TrainBatch& batch, math::Rng& rng) override;

  double lambda_value() const override { return lagrange_.multiplier(); }
  // One policy, one temperature; reported under both columns.
  double alpha_um() const override { return tuner_.alpha_um(); }
  double alpha_se() const override { return tuner_.alpha_um(); }

  void save(util::CheckpointWriter& w) const override;
  void load(const util::CheckpointReader& r) override;

  const nn::Mlp& actor() const { return actor_; }
  const Critics& critics() const { return critics_; }

 private:
  AgentConfig cfg_;
  nn::Mlp actor_;
  dist::HeadConfig head_;
  Critics critics_;
  nn::AdamState actor_opt_;
  LagrangeState lagrange_;
  EntropyTuner tuner_;
};

}  // namespace seditor::agent
