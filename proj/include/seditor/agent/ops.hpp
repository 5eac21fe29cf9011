#pragma once

#include <Eigen/Dense>

#include "seditor/agent/critics.hpp"
#include "seditor/agent/modes.hpp"
#include "seditor/dist/head.hpp"
#include "seditor/nn/mlp.hpp"

namespace seditor::agent {

// Two-policy actor. The utility maximizer (um) reads the observation
// and proposes an action; the safety editor (se) reads the observation
// concatenated with the box-coordinate proposal and produces the
// adjustment that the editing function turns into the executed action.
struct ActorPair {
  nn::Mlp um;
  nn::Mlp se;
  dist::HeadConfig um_head;
  dist::HeadConfig se_head;
  EditMode edit_mode = EditMode::kAdditive;
};

// Per-column driving noise for a batch of head samples.
Eigen::MatrixXd head_noise_batch(const dist::HeadConfig& cfg, int batch,
                                 math::Rng& rng);

// Stochastic composed actions, act_dim x batch, no gradient bookkeeping.
// Used for rollouts and TD-target next actions.
Eigen::MatrixXd composed_actions(const ActorPair& pair,
                                 const Eigen::MatrixXd& obs,
                                 const Eigen::MatrixXd& um_noise,
                                 const Eigen::MatrixXd& se_noise);

// Deterministic evaluation-mode action: mean proposal, mean edit.
Eigen::VectorXd composed_mean_action(const ActorPair& pair,
                                     const Eigen::VectorXd& obs);

struct PolicyGradient {
  double objective = 0.0;        // value being maximized
  double mean_entropy = 0.0;     // closed-form entropy of the trained policy
  double mean_neg_log_prob = 0.0;  // sample-based estimate for the tuner
  Eigen::VectorXd grad;          // d objective / d trained-net params
};

// Utility-maximizer objective: mean[min Q(s, a)] + alpha * mean entropy,
// with a = h(proposal, delta). Gradients flow to the um network only,
// through both the direct editing path and the editor's dependence on
// the proposal; the se and critic parameters are treated as constants.
PolicyGradient um_objective(const ActorPair& pair, const Critics& critics,
                            const Eigen::MatrixXd& obs,
                            const Eigen::MatrixXd& um_noise,
                            const Eigen::MatrixXd& se_noise, double alpha_um,
                            bool want_grad);

// Safety-editor objective: mean[-d(a, proposal) + lambda * Qc(s, a)]
// + alpha * mean entropy. Hinge distance d = max(0, Q(s, proposal) -
// Q(s, a)) penalizes only edits that lower utility value; the
// Q(s, proposal) branch carries no gradient. Gradients flow to the se
// network only.
PolicyGradient se_objective(const ActorPair& pair, const Critics& critics,
                            DistanceMode distance_mode,
                            const Eigen::MatrixXd& obs,
                            const Eigen::MatrixXd& um_noise,
                            const Eigen::MatrixXd& se_noise, double lambda,
                            double alpha_se, bool want_grad);

// Single-policy baseline objective: mean[min Q + lambda * Qc] + alpha *
// mean entropy. The lambda term is always evaluated, so an agent with
// lambda fixed at exactly 0.0 runs the same arithmetic as one without
// a constraint path.
PolicyGradient sac_objective(const nn::Mlp& actor,
                             const dist::HeadConfig& head,
                             const Critics& critics,
                             const Eigen::MatrixXd& obs,
                             const Eigen::MatrixXd& noise, double lambda,
                             double alpha, bool want_grad);

}  // namespace seditor::agent
