#pragma once

#include "seditor/agent/agent.hpp"
#include "seditor/agent/critics.hpp"
#include "seditor/agent/entropy_tuner.hpp"
#include "seditor/agent/lagrange.hpp"
#include "seditor/agent/ops.hpp"
#include "seditor/nn/adam.hpp"

namespace seditor::agent {

// The two-policy agent: utility maximizer proposes, safety editor
// corrects, both trained off-policy against shared utility/constraint
// critics with a Lagrangian dual and per-policy entropy temperatures.
class SEditorAgent : public Agent {
 public:
  explicit SEditorAgent(const AgentConfig& cfg);

  Eigen::VectorXd act(const Eigen::VectorXd& obs,
                      math::Rng& rng) const override;
  Eigen::VectorXd act_greedy(const Eigen::VectorXd& obs) const override;
  void multiplier_step(const std::vector<double>& rc_raw,
                       double budget) override;
  UpdateStats gradient_step(const TrainBatch& batch, math::Rng& rng) override;

  double lambda_value() const override { return lagrange_.multiplier(); }
  double alpha_um() const override { return tuner_.alpha_um(); }
  double alpha_se() const override { return tuner_.alpha_se(); }

  void save(util::CheckpointWriter& w) const override;
  void load(const util::CheckpointReader& r) override;

  const ActorPair& actors() const { return pair_; }
  const Critics& critics() const { return critics_; }
  const LagrangeState& lagrange() const { return lagrange_; }

 private:
  AgentConfig cfg_;
  ActorPair pair_;
  Critics critics_;
  nn::AdamState um_opt_;
  nn::AdamState se_opt_;
  LagrangeState lagrange_;
  EntropyTuner tuner_;
};

}  // namespace seditor::agent
