#include "seditor/agent/sac_agent.hpp"

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

}  // namespace

SacAgent::SacAgent(const AgentConfig& cfg)
    : cfg_(cfg),
      actor_(cfg.obs_dim, cfg.actor_hidden, 2 * cfg.act_dim,
             nn::Activation::kTanh),
      head_(make_head(cfg)),
      critics_([&] {
        math::Rng rng(math::derive_seed(cfg.init_seed, kInitStream, 2));
        CriticsConfig ccfg;
        ccfg.obs_dim = cfg.obs_dim;
        ccfg.act_dim = cfg.act_dim;
        ccfg.hidden = cfg.critic_hidden;
        ccfg.tau = cfg.tau;
        ccfg.twin = cfg.twin_q;
        return Critics(ccfg, rng);
      }()),
      actor_opt_(actor_.param_count()),
      lagrange_(cfg.lagrangian ? cfg.initial_lambda : 0.0,
                cfg.lagrangian ? cfg.lr_lambda : 0.0),
      tuner_(cfg.entropy_target_um, cfg.entropy_target_um, cfg.act_dim,
             cfg.lr) {
  math::Rng actor_rng(math::derive_seed(cfg.init_seed, kInitStream, 0));
  actor_.init(actor_rng);
}

Eigen::VectorXd SacAgent::act(const Eigen::VectorXd& obs,
                              math::Rng& rng) const {
  const Eigen::VectorXd raw = forward(actor_, obs);
  return head_sample(head_, raw, head_noise(head_, rng), false).action;
}

Eigen::VectorXd SacAgent::act_greedy(const Eigen::VectorXd& obs) const {
  return head_mean_action(head_, forward(actor_, obs));
}

void SacAgent::multiplier_step(const std::vector<double>& rc_raw,
                               double budget) {
  // Plain SAC ignores the constraint signal entirely.
  if (!cfg_.lagrangian) return;
  lagrange_.step(lambda_estimate(rc_raw, budget), cfg_.simple_lambda_rule);
}

UpdateStats SacAgent::gradient_step(const TrainBatch& batch, math::Rng& rng) {
  const int batch_size = static_cast<int>(batch.obs.cols());
  UpdateStats stats;

  {
    const Eigen::MatrixXd noise = head_noise_batch(head_, batch_size, rng);
    Eigen::MatrixXd next_actions(head_.box.dims, batch_size);
    const Eigen::MatrixXd next_raw = forward(actor_, batch.next_obs);
    for (int j = 0; j < batch_size; ++j) {
      next_actions.col(j) =
          head_sample(head_, next_raw.col(j), noise.col(j), false).action;
    }
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

  const PolicyGradient actor_res = [&] {
    const Eigen::MatrixXd noise = head_noise_batch(head_, batch_size, rng);
    return sac_objective(actor_, head_, critics_, batch.obs, noise,
                         lagrange_.multiplier(), tuner_.alpha_um(), true);
  }();
  adam_step(actor_opt_, actor_, (-actor_res.grad).eval(), cfg_.lr);
  stats.um_objective = actor_res.objective;
  stats.stages.push_back("actor");

  tuner_.step_um(actor_res.mean_neg_log_prob);
  stats.stages.push_back("entropy");

  critics_.sync_targets();
  stats.stages.push_back("target");
  return stats;
}

void SacAgent::save(util::CheckpointWriter& w) const {
  w.add_vector("actor.params", actor_.params());
  w.add_vector("actor_opt.m", actor_opt_.m);
  w.add_vector("actor_opt.v", actor_opt_.v);
  w.add_scalar("actor_opt.t", static_cast<double>(actor_opt_.t));
  critics_.save(w, "critics");
  w.add_scalar("lambda0", lagrange_.raw());
  w.add_scalar("log_alpha_um", tuner_.log_alpha_um());
}

void SacAgent::load(const util::CheckpointReader& r) {
  actor_.set_params(r.vector("actor.params", actor_.param_count()));
  actor_opt_.m = r.vector("actor_opt.m", actor_opt_.m.size());
  actor_opt_.v = r.vector("actor_opt.v", actor_opt_.v.size());
  actor_opt_.t = static_cast<long>(r.scalar("actor_opt.t"));
  critics_.load(r, "critics");
  lagrange_.set_raw(r.scalar("lambda0"));
  tuner_.set_log_alpha_um(r.scalar("log_alpha_um"));
}

std::unique_ptr<Agent> make_agent(const std::string& kind, AgentConfig cfg) {
  if (kind == "seditor") {
    return std::make_unique<SEditorAgent>(cfg);
  }
  if (kind == "sac" || kind == "sac_lag") {
    cfg.lagrangian = kind == "sac_lag";
    return std::make_unique<SacAgent>(cfg);
  }
  throw ConfigError("agent must be 'seditor', 'sac' or 'sac_lag', got '" +
                    kind + "'");
}

}  // namespace seditor::agent
