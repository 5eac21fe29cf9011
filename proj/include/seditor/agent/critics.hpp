#pragma once

#include <Eigen/Dense>
#include <vector>

#include "seditor/nn/adam.hpp"
#include "seditor/nn/mlp.hpp"
#include "seditor/util/checkpoint.hpp"

namespace seditor::agent {

struct CriticsConfig {
  int obs_dim = 0;
  int act_dim = 0;
  std::vector<int> hidden;
  double tau = 5e-3;
  // Optional clipped double-Q. Off by default: single critics keep the
  // policy-gradient oracles exact, and nothing in the algorithm needs
  // the pessimism.
  bool twin = false;
};

struct CriticLosses {
  double q = 0.0;
  double qc = 0.0;
};

// Utility critic Q(s,a) and constraint critic Qc(s,a) with Polyak-
// averaged target copies. Values reported to policies are the minimum
// over twins when twin mode is on.
class Critics {
 public:
  Critics(const CriticsConfig& cfg, math::Rng& init_rng);

  int twin_count() const { return cfg_.twin ? 2 : 1; }
  const CriticsConfig& config() const { return cfg_; }

  // input: (obs_dim + act_dim) x batch columns.
  Eigen::VectorXd q_value(const Eigen::MatrixXd& input) const;
  Eigen::VectorXd qc_value(const Eigen::MatrixXd& input) const;
  Eigen::VectorXd q_target(const Eigen::MatrixXd& input) const;
  Eigen::VectorXd qc_target(const Eigen::MatrixXd& input) const;

  // Gradient of sum_j w_j * Q(input_j) w.r.t. the inputs (twin minimum
  // respected: each sample's weight lands on its argmin network).
  Eigen::MatrixXd q_input_grad(const Eigen::MatrixXd& input,
                               const Eigen::VectorXd& weights) const;
  Eigen::MatrixXd qc_input_grad(const Eigen::MatrixXd& input,
                                const Eigen::VectorXd& weights) const;

  // One MSE gradient step per critic net toward the given targets.
  CriticLosses update(const Eigen::MatrixXd& input,
                      const Eigen::VectorXd& target_q,
                      const Eigen::VectorXd& target_qc, double lr);

  void sync_targets();

  void save(util::CheckpointWriter& w, const std::string& prefix) const;
  void load(const util::CheckpointReader& r, const std::string& prefix);

 private:
  CriticsConfig cfg_;
  // index 0/1: live twins; same layout for targets and optimizers.
  std::vector<nn::Mlp> q_, qc_, q_tgt_, qc_tgt_;
  std::vector<nn::AdamState> q_opt_, qc_opt_;

  static Eigen::VectorXd min_value(const std::vector<nn::Mlp>& nets,
                                   const Eigen::MatrixXd& input);
  static Eigen::MatrixXd weighted_input_grad(const std::vector<nn::Mlp>& nets,
                                             const Eigen::MatrixXd& input,
                                             const Eigen::VectorXd& weights);
  static double mse_step(nn::Mlp& net, nn::AdamState& opt,
                         const Eigen::MatrixXd& input,
                         const Eigen::VectorXd& target, double lr);
};

}  // namespace seditor::agent
