#include "seditor/agent/ops.hpp"

#include <cmath>

#include "seditor/util/error.hpp"

namespace seditor::agent {
namespace {

struct ComposedForward {
  nn::ForwardCache um_cache;
  nn::ForwardCache se_cache;
  std::vector<dist::HeadSample> um_samples;
  std::vector<dist::HeadSample> se_samples;
  Eigen::MatrixXd proposal;   // act_dim x batch
  Eigen::MatrixXd delta;      // act_dim x batch
  Eigen::MatrixXd action;     // act_dim x batch
  Eigen::MatrixXd pass_mask;  // clip gradient gates, act_dim x batch
};

void check_noise(const Eigen::MatrixXd& noise, int dims, Eigen::Index batch,
                 const char* who) {
  if (noise.rows() != dims || noise.cols() != batch) {
    throw DimensionError(std::string(who) + ": noise must be act_dim x batch");
  }
}

// Runs um -> se -> edit for a batch, keeping caches and per-sample head
// gradients when requested.
ComposedForward composed_forward(const ActorPair& pair,
                                 const Eigen::MatrixXd& obs,
                                 const Eigen::MatrixXd& um_noise,
                                 const Eigen::MatrixXd& se_noise,
                                 bool want_grad) {
  const Eigen::Index batch = obs.cols();
  const int m = pair.um_head.box.dims;
  check_noise(um_noise, m, batch, "composed_forward um");
  check_noise(se_noise, m, batch, "composed_forward se");

  ComposedForward f;
  const Eigen::MatrixXd um_raw = forward(pair.um, obs, &f.um_cache);
  f.proposal.resize(m, batch);
  f.um_samples.reserve(batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    f.um_samples.push_back(
        head_sample(pair.um_head, um_raw.col(j), um_noise.col(j), want_grad));
    f.proposal.col(j) = f.um_samples.back().action;
  }

  Eigen::MatrixXd se_input(obs.rows() + m, batch);
  se_input.topRows(obs.rows()) = obs;
  se_input.bottomRows(m) = f.proposal;
  const Eigen::MatrixXd se_raw = forward(pair.se, se_input, &f.se_cache);
  f.delta.resize(m, batch);
  f.se_samples.reserve(batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    f.se_samples.push_back(
        head_sample(pair.se_head, se_raw.col(j), se_noise.col(j), want_grad));
    f.delta.col(j) = f.se_samples.back().action;
  }

  f.action.resize(m, batch);
  f.pass_mask.resize(m, batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    Eigen::ArrayXd mask;
    f.action.col(j) = edit_action(pair.edit_mode, f.proposal.col(j),
                                  f.delta.col(j), pair.um_head.box.bound,
                                  &mask);
    f.pass_mask.col(j) = mask.matrix();
  }
  return f;
}

Eigen::MatrixXd with_actions(const Eigen::MatrixXd& obs,
                             const Eigen::MatrixXd& actions) {
  Eigen::MatrixXd input(obs.rows() + actions.rows(), obs.cols());
  input.topRows(obs.rows()) = obs;
  input.bottomRows(actions.rows()) = actions;
  return input;
}

// Maps per-dimension action gradients onto the head's raw parameters
// through the two stored Jacobian diagonals, adding the entropy bonus.
Eigen::MatrixXd raw_grad_from_action_grad(
    const std::vector<dist::HeadSample>& samples,
    const Eigen::MatrixXd& action_grad, double entropy_weight) {
  const Eigen::Index m = action_grad.rows();
  const Eigen::Index batch = action_grad.cols();
  Eigen::MatrixXd raw_grad(2 * m, batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    const auto& s = samples[static_cast<std::size_t>(j)];
    raw_grad.col(j).head(m) =
        (action_grad.col(j).array() * s.da_first.array()).matrix();
    raw_grad.col(j).tail(m) =
        (action_grad.col(j).array() * s.da_second.array()).matrix();
    raw_grad.col(j) += entropy_weight * s.dentropy_draw;
  }
  return raw_grad;
}

double mean_entropy_of(const std::vector<dist::HeadSample>& samples) {
  double sum = 0.0;
  for (const auto& s : samples) sum += s.entropy;
  return sum / static_cast<double>(samples.size());
}

double mean_neg_log_prob_of(const std::vector<dist::HeadSample>& samples) {
  double sum = 0.0;
  for (const auto& s : samples) sum -= s.log_prob;
  return sum / static_cast<double>(samples.size());
}

void check_objective_finite(double value, const char* who) {
  if (!std::isfinite(value)) {
    throw NumericError(std::string(who) + ": objective is not finite");
  }
}

}  // namespace

Eigen::MatrixXd head_noise_batch(const dist::HeadConfig& cfg, int batch,
                                 math::Rng& rng) {
  Eigen::MatrixXd noise(cfg.box.dims, batch);
  for (int j = 0; j < batch; ++j) noise.col(j) = head_noise(cfg, rng);
  return noise;
}

Eigen::MatrixXd composed_actions(const ActorPair& pair,
                                 const Eigen::MatrixXd& obs,
                                 const Eigen::MatrixXd& um_noise,
                                 const Eigen::MatrixXd& se_noise) {
  return composed_forward(pair, obs, um_noise, se_noise, false).action;
}

Eigen::VectorXd composed_mean_action(const ActorPair& pair,
                                     const Eigen::VectorXd& obs) {
  const Eigen::VectorXd um_raw = forward(pair.um, obs);
  const Eigen::VectorXd proposal = head_mean_action(pair.um_head, um_raw);
  Eigen::VectorXd se_input(obs.size() + proposal.size());
  se_input << obs, proposal;
  const Eigen::VectorXd se_raw = forward(pair.se, se_input);
  const Eigen::VectorXd delta = head_mean_action(pair.se_head, se_raw);
  return edit_action(pair.edit_mode, proposal, delta,
                     pair.um_head.box.bound);
}

PolicyGradient um_objective(const ActorPair& pair, const Critics& critics,
                            const Eigen::MatrixXd& obs,
                            const Eigen::MatrixXd& um_noise,
                            const Eigen::MatrixXd& se_noise, double alpha_um,
                            bool want_grad) {
  const Eigen::Index batch = obs.cols();
  const int m = pair.um_head.box.dims;
  ComposedForward f = composed_forward(pair, obs, um_noise, se_noise, want_grad);
  const Eigen::MatrixXd q_input = with_actions(obs, f.action);
  const Eigen::VectorXd q = critics.q_value(q_input);

  PolicyGradient out;
  out.mean_entropy = mean_entropy_of(f.um_samples);
  out.mean_neg_log_prob = mean_neg_log_prob_of(f.um_samples);
  out.objective = q.mean() + alpha_um * out.mean_entropy;
  check_objective_finite(out.objective, "um_objective");
  if (!want_grad) return out;

  const double inv_batch = 1.0 / static_cast<double>(batch);
  const Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(batch, inv_batch);
  const Eigen::MatrixXd action_grad =
      critics.q_input_grad(q_input, weights).bottomRows(m);

  // Through the editing function: the additive clip gates both the
  // direct proposal path and the delta path; overwrite keeps only the
  // delta path.
  Eigen::MatrixXd proposal_grad;
  Eigen::MatrixXd delta_grad;
  if (pair.edit_mode == EditMode::kAdditive) {
    proposal_grad = (action_grad.array() * f.pass_mask.array()).matrix();
    delta_grad = 2.0 * proposal_grad;
  } else {
    proposal_grad = Eigen::MatrixXd::Zero(m, batch);
    delta_grad = action_grad;
  }

  // The editor also saw the proposal as input; that path belongs to the
  // um gradient even though the editor's own parameters stay frozen.
  const Eigen::MatrixXd se_raw_grad =
      raw_grad_from_action_grad(f.se_samples, delta_grad, 0.0);
  const nn::BackwardResult se_back = backward(f.se_cache, se_raw_grad);
  proposal_grad += se_back.input_grad.bottomRows(m);

  const Eigen::MatrixXd um_raw_grad = raw_grad_from_action_grad(
      f.um_samples, proposal_grad, alpha_um * inv_batch);
  out.grad = backward(f.um_cache, um_raw_grad).param_grad;
  return out;
}

PolicyGradient se_objective(const ActorPair& pair, const Critics& critics,
                            DistanceMode distance_mode,
                            const Eigen::MatrixXd& obs,
                            const Eigen::MatrixXd& um_noise,
                            const Eigen::MatrixXd& se_noise, double lambda,
                            double alpha_se, bool want_grad) {
  const Eigen::Index batch = obs.cols();
  const int m = pair.um_head.box.dims;
  ComposedForward f = composed_forward(pair, obs, um_noise, se_noise, want_grad);
  const Eigen::MatrixXd q_input = with_actions(obs, f.action);
  const Eigen::VectorXd qc = critics.qc_value(q_input);

  Eigen::VectorXd distance(batch);
  Eigen::VectorXd hinge_active;  // per-sample 0/1, hinge mode only
  if (distance_mode == DistanceMode::kHinge) {
    const Eigen::VectorXd q_at_action = critics.q_value(q_input);
    const Eigen::VectorXd q_at_proposal =
        critics.q_value(with_actions(obs, f.proposal));
    hinge_active.resize(batch);
    for (Eigen::Index j = 0; j < batch; ++j) {
      const double gap = q_at_proposal(j) - q_at_action(j);
      distance(j) = std::max(0.0, gap);
      hinge_active(j) = gap > 0.0 ? 1.0 : 0.0;
    }
  } else {
    for (Eigen::Index j = 0; j < batch; ++j) {
      distance(j) = (f.action.col(j) - f.proposal.col(j)).squaredNorm();
    }
  }

  PolicyGradient out;
  out.mean_entropy = mean_entropy_of(f.se_samples);
  out.mean_neg_log_prob = mean_neg_log_prob_of(f.se_samples);
  out.objective = (-distance + lambda * qc).mean() + alpha_se * out.mean_entropy;
  check_objective_finite(out.objective, "se_objective");
  if (!want_grad) return out;

  const double inv_batch = 1.0 / static_cast<double>(batch);
  Eigen::MatrixXd action_grad =
      critics
          .qc_input_grad(q_input,
                         Eigen::VectorXd::Constant(batch, lambda * inv_batch))
          .bottomRows(m);
  if (distance_mode == DistanceMode::kHinge) {
    // -d contributes +dQ(s,a)/da on samples where the hinge is active;
    // the Q(s, proposal) branch is constant for the editor.
    action_grad +=
        critics.q_input_grad(q_input, hinge_active * inv_batch).bottomRows(m);
  } else {
    action_grad += -2.0 * inv_batch * (f.action - f.proposal);
  }

  // Only the delta path trains the editor; the proposal is someone
  // else's output.
  Eigen::MatrixXd delta_grad;
  if (pair.edit_mode == EditMode::kAdditive) {
    delta_grad = 2.0 * (action_grad.array() * f.pass_mask.array()).matrix();
  } else {
    delta_grad = action_grad;
  }
  const Eigen::MatrixXd se_raw_grad = raw_grad_from_action_grad(
      f.se_samples, delta_grad, alpha_se * inv_batch);
  out.grad = backward(f.se_cache, se_raw_grad).param_grad;
  return out;
}

PolicyGradient sac_objective(const nn::Mlp& actor,
                             const dist::HeadConfig& head,
                             const Critics& critics,
                             const Eigen::MatrixXd& obs,
                             const Eigen::MatrixXd& noise, double lambda,
                             double alpha, bool want_grad) {
  const Eigen::Index batch = obs.cols();
  const int m = head.box.dims;
  check_noise(noise, m, batch, "sac_objective");

  nn::ForwardCache cache;
  const Eigen::MatrixXd raw = forward(actor, obs, &cache);
  std::vector<dist::HeadSample> samples;
  samples.reserve(batch);
  Eigen::MatrixXd actions(m, batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    samples.push_back(head_sample(head, raw.col(j), noise.col(j), want_grad));
    actions.col(j) = samples.back().action;
  }
  const Eigen::MatrixXd q_input = with_actions(obs, actions);
  const Eigen::VectorXd q = critics.q_value(q_input);
  const Eigen::VectorXd qc = critics.qc_value(q_input);

  PolicyGradient out;
  out.mean_entropy = mean_entropy_of(samples);
  out.mean_neg_log_prob = mean_neg_log_prob_of(samples);
  out.objective = (q + lambda * qc).mean() + alpha * out.mean_entropy;
  check_objective_finite(out.objective, "sac_objective");
  if (!want_grad) return out;

  const double inv_batch = 1.0 / static_cast<double>(batch);
  const Eigen::MatrixXd action_grad =
      (critics.q_input_grad(q_input,
                            Eigen::VectorXd::Constant(batch, inv_batch)) +
       critics.qc_input_grad(
           q_input, Eigen::VectorXd::Constant(batch, lambda * inv_batch)))
          .bottomRows(m);
  const Eigen::MatrixXd raw_grad =
      raw_grad_from_action_grad(samples, action_grad, alpha * inv_batch);
  out.grad = backward(cache, raw_grad).param_grad;
  return out;
}

}  // namespace seditor::agent
