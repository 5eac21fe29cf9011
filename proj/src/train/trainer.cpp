#include "seditor/train/trainer.hpp"

#include <cmath>
#include <fstream>
#include <utility>

#include "seditor/env/bandit.hpp"
#include "seditor/env/pointnav.hpp"
#include "seditor/util/error.hpp"
#include "seditor/util/log.hpp"

namespace seditor::train {
namespace {

// Sub-seed streams hanging off the config master seed. Agents burn
// stream 2 internally for parameter init.
constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kRolloutStream = 3;
constexpr std::uint64_t kUpdateStream = 4;
constexpr std::uint64_t kReplayStream = 5;
constexpr std::uint64_t kEvalStream = 6;

constexpr int kMaxConsecutiveAborts = 10;

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<long>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::unique_ptr<env::CmdpEnv> make_env(const TrainerConfig& cfg) {
  if (cfg.env == "bandit") return std::make_unique<env::BanditEnv>();
  if (cfg.env == "pointnav") {
    return std::make_unique<env::PointNavEnv>(cfg.hazard_count, cfg.horizon,
                                              cfg.lidar_bins);
  }
  throw ConfigError("unknown env '" + cfg.env + "'");
}

agent::AgentConfig agent_config(const TrainerConfig& cfg,
                                const env::EnvSpec& spec) {
  agent::AgentConfig a;
  a.obs_dim = spec.obs_dim;
  a.act_dim = spec.act_dim;
  a.action_bound = spec.action_bound;
  a.head_kind = cfg.head == "beta" ? dist::HeadKind::kBeta
                                   : dist::HeadKind::kSquashedGaussian;
  a.min_concentration = cfg.min_concentration;
  a.actor_hidden.assign(cfg.hidden_layers, cfg.hidden_units * cfg.actor_width);
  a.critic_hidden.assign(cfg.hidden_layers, cfg.hidden_units);
  a.lr = cfg.lr;
  a.gamma = cfg.gamma;
  a.tau = cfg.tau;
  a.lr_lambda = cfg.lr_lambda;
  a.initial_lambda = cfg.initial_lambda;
  a.simple_lambda_rule = cfg.simple_lambda_rule;
  a.entropy_target_um = cfg.entropy_target_um;
  a.entropy_target_se = cfg.entropy_target_se;
  a.edit_mode = agent::parse_edit_mode(cfg.edit_mode);
  a.distance_mode = agent::parse_distance_mode(cfg.distance_mode);
  a.twin_q = cfg.twin_q;
  a.init_seed = cfg.seed;
  return a;
}

Trainer::Trainer(const TrainerConfig& cfg, const std::string& out_dir)
    : cfg_(cfg) {
  cfg_.validate();
  build(out_dir);
}

Trainer::Trainer(const std::string& checkpoint_prefix,
                 const std::string& out_dir) {
  util::CheckpointReader r(checkpoint_prefix);
  cfg_ = TrainerConfig::parse(r.text("config"));
  build(out_dir);
  read_state(r);
}

void Trainer::build(const std::string& out_dir) {
  out_dir_ = out_dir;
  envs_ = std::make_unique<env::BatchEnv>(
      [this]() { return make_env(cfg_); }, cfg_.parallel_envs,
      math::derive_seed(cfg_.seed, kEnvStream));
  agent_ = agent::make_agent(cfg_.agent, agent_config(cfg_, envs_->spec()));
  buffer_ = std::make_unique<ReplayBuffer>(cfg_.buffer_capacity);
  normalizer_ = std::make_unique<RewardNormalizer>(cfg_.normalizer_decay,
                                                   cfg_.normalizer_clip);
  rollout_rng_ = math::Rng(math::derive_seed(cfg_.seed, kRolloutStream));
  update_rng_ = math::Rng(math::derive_seed(cfg_.seed, kUpdateStream));
  replay_rng_ = math::Rng(math::derive_seed(cfg_.seed, kReplayStream));
  episode_return_ = Eigen::VectorXd::Zero(cfg_.parallel_envs);
  next_metrics_at_ = cfg_.metrics_interval_steps;
  next_checkpoint_at_ = cfg_.checkpoint_interval_steps;
  if (!out_dir_.empty()) {
    writer_ = std::make_unique<MetricsWriter>(out_dir_ + "/metrics.csv");
  }
  start_ = std::chrono::steady_clock::now();
}

void Trainer::rollout() {
  rollout_rc_.clear();
  const int n = envs_->size();
  const int act_dim = envs_->spec().act_dim;
  for (int s = 0; s < cfg_.train_interval; ++s) {
    // Copy: auto-reset overwrites the live observation block in place.
    const Eigen::MatrixXd obs = envs_->observations();
    Eigen::MatrixXd actions(act_dim, n);
    for (int i = 0; i < n; ++i) {
      actions.col(i) = agent_->act(obs.col(i), rollout_rng_);
    }
    const std::vector<env::StepResult> results = envs_->step(actions);
    for (int i = 0; i < n; ++i) {
      const env::StepResult& res = results[i];
      Transition t;
      t.obs = obs.col(i);
      t.act = actions.col(i);
      t.next_obs = res.obs;
      t.reward = res.reward;
      t.constraint_reward = res.constraint_reward;
      t.terminal = res.terminal;
      t.timeout = res.timeout;
      buffer_->push(std::move(t));
      rollout_rc_.push_back(res.constraint_reward);
      ++env_steps_;
      ++window_steps_;
      window_violation_sum_ += -res.constraint_reward;
      episode_return_(i) += res.reward;
      if (res.terminal || res.timeout) {
        ++episodes_;
        ++window_episodes_;
        if (res.success) ++window_successes_;
        window_return_sum_ += episode_return_(i);
        episode_return_(i) = 0.0;
      }
    }
  }
}

agent::TrainBatch Trainer::assemble_batch() {
  const int b = cfg_.batch_size;
  const env::EnvSpec& spec = envs_->spec();
  agent::TrainBatch batch;
  batch.obs.resize(spec.obs_dim, b);
  batch.act.resize(spec.act_dim, b);
  batch.next_obs.resize(spec.obs_dim, b);
  batch.r.resize(b);
  batch.rc.resize(b);
  batch.discount.resize(b);
  // Same-instance successors sit a fixed stride apart because rollouts
  // push one transition per instance per env step, in instance order.
  const long stride = cfg_.parallel_envs;
  for (int k = 0; k < b; ++k) {
    long idx = buffer_->sample_absolute(replay_rng_);
    const Transition* t = &buffer_->at_absolute(idx);
    batch.obs.col(k) = t->obs;
    batch.act.col(k) = t->act;
    double ret = 0.0;
    double ret_c = 0.0;
    double factor = 1.0;
    int len = 0;
    for (;;) {
      ret += factor * t->reward;
      ret_c += factor * t->constraint_reward;
      factor *= cfg_.gamma;
      ++len;
      if (t->terminal || t->timeout || len >= cfg_.n_step) break;
      const long next = idx + stride;
      if (next >= buffer_->total_pushed()) break;  // successor not collected yet
      idx = next;
      t = &buffer_->at_absolute(idx);
    }
    batch.next_obs.col(k) = t->next_obs;
    batch.discount(k) = t->terminal ? 0.0 : factor;
    batch.r(k) = normalizer_->normalize_reward(ret);
    batch.rc(k) = normalizer_->normalize_constraint(ret_c);
  }
  return batch;
}

bool Trainer::iteration() {
  if (env_steps_ >= cfg_.total_steps) return false;
  rollout();
  last_stages_.clear();
  if (buffer_->size() >= cfg_.initial_rollout) {
    util::CheckpointWriter snapshot;
    write_rollback(snapshot);
    try {
      agent_->multiplier_step(rollout_rc_, cfg_.c);
      last_stages_.push_back("lambda");
      const agent::TrainBatch batch = assemble_batch();
      const agent::UpdateStats stats = agent_->gradient_step(batch, update_rng_);
      last_stages_.insert(last_stages_.end(), stats.stages.begin(),
                          stats.stages.end());
      consecutive_aborts_ = 0;
    } catch (const NumericError& e) {
      read_rollback(util::CheckpointReader(snapshot));
      last_stages_.clear();
      ++total_aborts_;
      ++consecutive_aborts_;
      log::error("[train] iteration %ld aborted, state rolled back: %s",
                 iteration_, e.what());
      if (consecutive_aborts_ >= kMaxConsecutiveAborts) {
        throw Error("training diverged: " +
                          std::to_string(kMaxConsecutiveAborts) +
                          " consecutive aborted iterations");
      }
    }
  }
  ++iteration_;
  if (cfg_.metrics_interval_steps == 0) {
    emit_row();
  } else if (env_steps_ >= next_metrics_at_) {
    emit_row();
    while (next_metrics_at_ <= env_steps_) {
      next_metrics_at_ += cfg_.metrics_interval_steps;
    }
  }
  if (!out_dir_.empty() && cfg_.checkpoint_interval_steps > 0 &&
      env_steps_ >= next_checkpoint_at_) {
    save_checkpoint(out_dir_ + "/checkpoint_" + std::to_string(env_steps_));
    while (next_checkpoint_at_ <= env_steps_) {
      next_checkpoint_at_ += cfg_.checkpoint_interval_steps;
    }
  }
  return env_steps_ < cfg_.total_steps;
}

void Trainer::run() {
  while (iteration()) {
  }
  if (window_steps_ > 0) emit_row();  // leftover partial window
  if (out_dir_.empty()) return;
  save_checkpoint(out_dir_ + "/checkpoint_final");
  MetricsRow last;
  if (!rows_.empty()) last = rows_.back();
  std::ofstream summary(out_dir_ + "/summary.txt");
  if (!summary) throw IoError("cannot write " + out_dir_ + "/summary.txt");
  summary << "env_steps = " << env_steps_ << '\n'
          << "episodes = " << episodes_ << '\n'
          << "success_rate = " << last.success_rate << '\n'
          << "mean_episode_return = " << last.mean_episode_return << '\n'
          << "violation_rate = " << last.violation_rate << '\n'
          << "swu = " << last.swu << '\n'
          << "lambda = " << last.lambda << '\n'
          << "aborted_iterations = " << total_aborts_ << '\n';
  if (!summary) throw IoError("write failed for summary.txt");
}

void Trainer::emit_row() {
  MetricsRow row;
  row.env_steps = env_steps_;
  row.episodes = episodes_;
  if (window_episodes_ > 0) {
    carry_success_rate_ =
        static_cast<double>(window_successes_) / window_episodes_;
    carry_mean_return_ = window_return_sum_ / window_episodes_;
  }
  row.success_rate = carry_success_rate_;
  row.mean_episode_return = carry_mean_return_;
  row.violation_rate =
      window_steps_ > 0 ? window_violation_sum_ / window_steps_ : 0.0;
  row.lambda = agent_->lambda_value();
  row.alpha_um = agent_->alpha_um();
  row.alpha_se = agent_->alpha_se();
  history_.push_back({static_cast<double>(env_steps_),
                      static_cast<double>(window_steps_),
                      window_violation_sum_,
                      static_cast<double>(window_episodes_),
                      static_cast<double>(window_successes_),
                      window_return_sum_});
  row.swu = trailing_swu();
  row.wall_time =
      wall_offset_ +
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
  window_violation_sum_ = 0.0;
  window_steps_ = 0;
  window_episodes_ = 0;
  window_successes_ = 0;
  window_return_sum_ = 0.0;
  rows_.push_back(row);
  if (writer_) writer_->emit(row);
}

double Trainer::trailing_swu() const {
  const double cutoff = 0.9 * static_cast<double>(env_steps_);
  double steps = 0.0, violations = 0.0, eps = 0.0, successes = 0.0, ret = 0.0;
  for (auto it = history_.rbegin(); it != history_.rend(); ++it) {
    if (it->cum_steps <= cutoff) break;
    steps += it->steps;
    violations += it->violation_sum;
    eps += it->episodes;
    successes += it->successes;
    ret += it->return_sum;
  }
  if (steps <= 0.0) return 0.0;
  const double measured = violations / steps;
  double utility = 0.0;
  if (cfg_.utility_metric == "success") {
    utility = eps > 0.0 ? successes / eps : 0.0;
  } else {
    utility = eps > 0.0 ? ret / eps : 0.0;
  }
  return compute_swu(cfg_.c, measured, utility, cfg_.swu_baseline_utility);
}

// Rollback covers exactly what a gradient iteration mutates after the
// rollout: agent (nets, optimizers, lambda, tuner), normalizer stats,
// and the update/replay RNG streams.
void Trainer::write_rollback(util::CheckpointWriter& w) const {
  agent_->save(w);
  normalizer_->save(w, "normalizer");
  w.add_text("rng.update", update_rng_.save());
  w.add_text("rng.replay", replay_rng_.save());
}

void Trainer::read_rollback(const util::CheckpointReader& r) {
  agent_->load(r);
  normalizer_->load(r, "normalizer");
  update_rng_.load(r.text("rng.update"));
  replay_rng_.load(r.text("rng.replay"));
}

void Trainer::write_state(util::CheckpointWriter& w) const {
  w.add_text("config", cfg_.to_text());
  write_rollback(w);
  w.add_text("rng.rollout", rollout_rng_.save());
  buffer_->save(w, "replay");
  w.add_vector("env.state", to_eigen(envs_->state()));
  w.add_vector("env.episode_return", episode_return_);
  w.add_scalar("trainer.env_steps", static_cast<double>(env_steps_));
  w.add_scalar("trainer.episodes", static_cast<double>(episodes_));
  w.add_scalar("trainer.iteration", static_cast<double>(iteration_));
  w.add_scalar("trainer.total_aborts", static_cast<double>(total_aborts_));
  w.add_scalar("trainer.consecutive_aborts",
               static_cast<double>(consecutive_aborts_));
  w.add_scalar("trainer.next_metrics_at", static_cast<double>(next_metrics_at_));
  w.add_scalar("trainer.next_checkpoint_at",
               static_cast<double>(next_checkpoint_at_));
  w.add_scalar("trainer.window_violation_sum", window_violation_sum_);
  w.add_scalar("trainer.window_steps", static_cast<double>(window_steps_));
  w.add_scalar("trainer.window_episodes", static_cast<double>(window_episodes_));
  w.add_scalar("trainer.window_successes",
               static_cast<double>(window_successes_));
  w.add_scalar("trainer.window_return_sum", window_return_sum_);
  w.add_scalar("trainer.carry_success_rate", carry_success_rate_);
  w.add_scalar("trainer.carry_mean_return", carry_mean_return_);
  w.add_scalar("trainer.wall_seconds",
               wall_offset_ + std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - start_)
                                  .count());
  Eigen::MatrixXd hist(6, static_cast<long>(history_.size()));
  for (long i = 0; i < hist.cols(); ++i) {
    const WindowSummary& s = history_[static_cast<std::size_t>(i)];
    hist.col(i) << s.cum_steps, s.steps, s.violation_sum, s.episodes,
        s.successes, s.return_sum;
  }
  w.add_matrix("trainer.history", hist);
}

void Trainer::read_state(const util::CheckpointReader& r) {
  read_rollback(r);
  rollout_rng_.load(r.text("rng.rollout"));
  buffer_->load(r, "replay");
  envs_->restore(to_std(r.vector("env.state",
                                 r.shape("env.state").first)));
  episode_return_ = r.vector("env.episode_return", cfg_.parallel_envs);
  env_steps_ = static_cast<long>(r.scalar("trainer.env_steps"));
  episodes_ = static_cast<long>(r.scalar("trainer.episodes"));
  iteration_ = static_cast<long>(r.scalar("trainer.iteration"));
  total_aborts_ = static_cast<long>(r.scalar("trainer.total_aborts"));
  consecutive_aborts_ =
      static_cast<int>(r.scalar("trainer.consecutive_aborts"));
  next_metrics_at_ = static_cast<long>(r.scalar("trainer.next_metrics_at"));
  next_checkpoint_at_ =
      static_cast<long>(r.scalar("trainer.next_checkpoint_at"));
  window_violation_sum_ = r.scalar("trainer.window_violation_sum");
  window_steps_ = static_cast<long>(r.scalar("trainer.window_steps"));
  window_episodes_ = static_cast<long>(r.scalar("trainer.window_episodes"));
  window_successes_ = static_cast<long>(r.scalar("trainer.window_successes"));
  window_return_sum_ = r.scalar("trainer.window_return_sum");
  carry_success_rate_ = r.scalar("trainer.carry_success_rate");
  carry_mean_return_ = r.scalar("trainer.carry_mean_return");
  wall_offset_ = r.scalar("trainer.wall_seconds");
  start_ = std::chrono::steady_clock::now();
  const long hcols = r.shape("trainer.history").second;
  const Eigen::MatrixXd hist = r.matrix("trainer.history", 6, hcols);
  history_.clear();
  for (long i = 0; i < hcols; ++i) {
    history_.push_back({hist(0, i), hist(1, i), hist(2, i), hist(3, i),
                        hist(4, i), hist(5, i)});
  }
}

void Trainer::save_checkpoint(const std::string& prefix) const {
  util::CheckpointWriter w;
  write_state(w);
  w.save(prefix);
}

EvalReport evaluate_checkpoint(const std::string& checkpoint_prefix,
                               int episodes,
                               std::optional<std::uint64_t> seed) {
  if (episodes < 1) throw ConfigError("eval episodes must be >= 1");
  const util::CheckpointReader r(checkpoint_prefix);
  const TrainerConfig cfg = TrainerConfig::parse(r.text("config"));
  std::unique_ptr<env::CmdpEnv> env = make_env(cfg);
  std::unique_ptr<agent::Agent> agent =
      agent::make_agent(cfg.agent, agent_config(cfg, env->spec()));
  agent->load(r);

  const std::uint64_t master = seed.value_or(cfg.seed);
  EvalReport report;
  double total_return = 0.0;
  double total_violations = 0.0;
  long total_steps = 0;
  long successes = 0;
  for (int e = 0; e < episodes; ++e) {
    EvalEpisode ep;
    Eigen::VectorXd obs =
        env->reset(math::derive_seed(master, kEvalStream,
                                     static_cast<std::uint64_t>(e)));
    for (;;) {
      const env::StepResult res = env->step(agent->act_greedy(obs));
      ++ep.steps;
      ep.episode_return += res.reward;
      ep.violation_sum += -res.constraint_reward;
      if (res.success) ep.success = true;
      obs = res.obs;
      if (res.terminal || res.timeout) break;
    }
    total_return += ep.episode_return;
    total_violations += ep.violation_sum;
    total_steps += ep.steps;
    if (ep.success) ++successes;
    report.episodes.push_back(ep);
  }
  report.success_rate = static_cast<double>(successes) / episodes;
  report.mean_return = total_return / episodes;
  report.violation_rate =
      total_steps > 0 ? total_violations / static_cast<double>(total_steps) : 0.0;
  return report;
}

}  // namespace seditor::train
