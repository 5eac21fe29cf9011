#include "seditor/agent/seditor_agent.hpp"

#include "seditor/util/error.hpp"

namespace seditor::agent {
namespace {

constexpr std::uint64_t kInitStream = 2;

dist::HeadConfig make_head(const AgentConfig& cfg) {
  dist::HeadConfig head;
  head.kind = cfg.head_kind;
  head.box = {cfg.act_dim, cfg.action_bound};
  head.min_concentration = cfg.min_concentration;
  return head;
}

Critics make_critics(const AgentConfig& cfg, math::Rng& rng) {
  CriticsConfig ccfg;
  ccfg.obs_dim = cfg.obs_dim;
  ccfg.act_dim = cfg.act_dim;
  ccfg.hidden = cfg.critic_hidden;
  ccfg.tau = cfg.tau;
  ccfg.twin = cfg.twin_q;
  return Critics(ccfg, rng);
}

}  // namespace

SEditorAgent::SEditorAgent(const AgentConfig& cfg)
    : cfg_(cfg),
      pair_{nn::Mlp(cfg.obs_dim, cfg.actor_hidden, 2 * cfg.act_dim,
                    nn::Activation::kTanh),
            nn::Mlp(cfg.obs_dim + cfg.act_dim, cfg.actor_hidden,
                    2 * cfg.act_dim, nn::Activation::kTanh),
            make_head(cfg), make_head(cfg), cfg.edit_mode},
      critics_([&] {
        math::Rng rng(math::derive_seed(cfg.init_seed, kInitStream, 2));
        return make_critics(cfg, rng);
      }()),
      um_opt_(pair_.um.param_count()),
      se_opt_(pair_.se.param_count()),
      lagrange_(cfg.initial_lambda, cfg.lr_lambda),
      tuner_(cfg.entropy_target_um, cfg.entropy_target_se, cfg.act_dim,
             cfg.lr) {
  math::Rng um_rng(math::derive_seed(cfg.init_seed, kInitStream, 0));
  pair_.um.init(um_rng);
  math::Rng se_rng(math::derive_seed(cfg.init_seed, kInitStream, 1));
  pair_.se.init(se_rng);
}

Eigen::VectorXd SEditorAgent::act(const Eigen::VectorXd& obs,
                                  math::Rng& rng) const {
  const Eigen::VectorXd um_noise = head_noise(pair_.um_head, rng);
  const Eigen::VectorXd se_noise = head_noise(pair_.se_head, rng);
  return composed_actions(pair_, obs, um_noise, se_noise).col(0);
}

Eigen::VectorXd SEditorAgent::act_greedy(const Eigen::VectorXd& obs) const {
  return composed_mean_action(pair_, obs);
}

void SEditorAgent::multiplier_step(const std::vector<double>& rc_raw,
                                   double budget) {
  lagrange_.step(lambda_estimate(rc_raw, budget), cfg_.simple_lambda_rule);
}

UpdateStats SEditorAgent::gradient_step(const TrainBatch& batch,
                                        math::Rng& rng) {
  const int batch_size = static_cast<int>(batch.obs.cols());
  UpdateStats stats;

  // Critic regression toward one-step targets; next actions come from
  // the current composed policy with fresh exploration noise, values
  // from the Polyak targets.
  {
    const Eigen::MatrixXd um_noise =
        head_noise_batch(pair_.um_head, batch_size, rng);
    const Eigen::MatrixXd se_noise =
        head_noise_batch(pair_.se_head, batch_size, rng);
    const Eigen::MatrixXd next_actions =
        composed_actions(pair_, batch.next_obs, um_noise, se_noise);
    Eigen::MatrixXd next_input(batch.next_obs.rows() + next_actions.rows(),
                               batch_size);
    next_input.topRows(batch.next_obs.rows()) = batch.next_obs;
    next_input.bottomRows(next_actions.rows()) = next_actions;

    const Eigen::VectorXd target_q =
        batch.r + (batch.discount * critics_.q_target(next_input).array())
                      .matrix();
    const Eigen::VectorXd target_qc =
        batch.rc + (batch.discount * critics_.qc_target(next_input).array())
                       .matrix();
    Eigen::MatrixXd input(batch.obs.rows() + batch.act.rows(), batch_size);
    input.topRows(batch.obs.rows()) = batch.obs;
    input.bottomRows(batch.act.rows()) = batch.act;
    const CriticLosses losses =
        critics_.update(input, target_q, target_qc, cfg_.lr);
    stats.q_loss = losses.q;
    stats.qc_loss = losses.qc;
    stats.stages.push_back("critic");
  }

  // Utility maximizer ascent.
  const PolicyGradient um_res = [&] {
    const Eigen::MatrixXd um_noise =
        head_noise_batch(pair_.um_head, batch_size, rng);
    const Eigen::MatrixXd se_noise =
        head_noise_batch(pair_.se_head, batch_size, rng);
    return um_objective(pair_, critics_, batch.obs, um_noise, se_noise,
                        tuner_.alpha_um(), true);
  }();
  adam_step(um_opt_, pair_.um, (-um_res.grad).eval(), cfg_.lr);
  stats.um_objective = um_res.objective;
  stats.stages.push_back("um");

  // Safety editor ascent.
  const PolicyGradient se_res = [&] {
    const Eigen::MatrixXd um_noise =
        head_noise_batch(pair_.um_head, batch_size, rng);
    const Eigen::MatrixXd se_noise =
        head_noise_batch(pair_.se_head, batch_size, rng);
    return se_objective(pair_, critics_, cfg_.distance_mode, batch.obs,
                        um_noise, se_noise, lagrange_.multiplier(),
                        tuner_.alpha_se(), true);
  }();
  adam_step(se_opt_, pair_.se, (-se_res.grad).eval(), cfg_.lr);
  stats.se_objective = se_res.objective;
  stats.stages.push_back("se");

  tuner_.step_um(um_res.mean_neg_log_prob);
  tuner_.step_se(se_res.mean_neg_log_prob);
  stats.stages.push_back("entropy");

  critics_.sync_targets();
  stats.stages.push_back("target");
  return stats;
}

void SEditorAgent::save(util::CheckpointWriter& w) const {
  w.add_vector("um.params", pair_.um.params());
  w.add_vector("se.params", pair_.se.params());
  w.add_vector("um_opt.m", um_opt_.m);
  w.add_vector("um_opt.v", um_opt_.v);
  w.add_scalar("um_opt.t", static_cast<double>(um_opt_.t));
  w.add_vector("se_opt.m", se_opt_.m);
  w.add_vector("se_opt.v", se_opt_.v);
  w.add_scalar("se_opt.t", static_cast<double>(se_opt_.t));
  critics_.save(w, "critics");
  w.add_scalar("lambda0", lagrange_.raw());
  w.add_scalar("log_alpha_um", tuner_.log_alpha_um());
  w.add_scalar("log_alpha_se", tuner_.log_alpha_se());
}

void SEditorAgent::load(const util::CheckpointReader& r) {
  pair_.um.set_params(r.vector("um.params", pair_.um.param_count()));
  pair_.se.set_params(r.vector("se.params", pair_.se.param_count()));
  um_opt_.m = r.vector("um_opt.m", um_opt_.m.size());
  um_opt_.v = r.vector("um_opt.v", um_opt_.v.size());
  um_opt_.t = static_cast<long>(r.scalar("um_opt.t"));
  se_opt_.m = r.vector("se_opt.m", se_opt_.m.size());
  se_opt_.v = r.vector("se_opt.v", se_opt_.v.size());
  se_opt_.t = static_cast<long>(r.scalar("se_opt.t"));
  critics_.load(r, "critics");
  lagrange_.set_raw(r.scalar("lambda0"));
  tuner_.set_log_alpha_um(r.scalar("log_alpha_um"));
  tuner_.set_log_alpha_se(r.scalar("log_alpha_se"));
}

}  // namespace seditor::agent
