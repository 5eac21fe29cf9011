#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seditor/agent/agent.hpp"
#include "seditor/env/batch_env.hpp"
#include "seditor/math/rng.hpp"
#include "seditor/train/config.hpp"
#include "seditor/train/metrics.hpp"
#include "seditor/train/normalizer.hpp"
#include "seditor/train/replay_buffer.hpp"
#include "seditor/util/checkpoint.hpp"

namespace seditor::train {

std::unique_ptr<env::CmdpEnv> make_env(const TrainerConfig& cfg);
agent::AgentConfig agent_config(const TrainerConfig& cfg,
                                const env::EnvSpec& spec);

// One training iteration = train_interval batched env steps, a dual
// update on exactly that rollout's raw constraint rewards, then a single
// critic/policy/entropy/target sweep (gated until the buffer holds
// initial_rollout transitions). A non-finite loss aborts the iteration:
// agent, normalizer and update RNG state roll back to the pre-update
// snapshot and the incident is logged; ten aborts in a row abandon the
// run. With an out_dir the trainer writes metrics.csv, periodic and
// final checkpoints, and summary.txt; without one everything stays in
// memory for tests.
class Trainer {
 public:
  Trainer(const TrainerConfig& cfg, const std::string& out_dir);
  // Resume: config and all mutable state come from the checkpoint.
  Trainer(const std::string& checkpoint_prefix, const std::string& out_dir);

  // False once total_steps have been collected.
  bool iteration();
  // Iterations to completion + final checkpoint and summary.
  void run();

  long env_steps() const { return env_steps_; }
  long episode_count() const { return episodes_; }
  long iterations() const { return iteration_; }
  long aborted_iterations() const { return total_aborts_; }
  const std::vector<MetricsRow>& rows() const { return rows_; }
  const TrainerConfig& config() const { return cfg_; }
  agent::Agent& agent() { return *agent_; }
  // Update phases of the last iteration, "lambda" first when it ran.
  const std::vector<std::string>& last_stages() const { return last_stages_; }

  void save_checkpoint(const std::string& prefix) const;

 private:
  void build(const std::string& out_dir);
  void rollout();
  agent::TrainBatch assemble_batch();
  void emit_row();
  double trailing_swu() const;
  void write_rollback(util::CheckpointWriter& w) const;
  void read_rollback(const util::CheckpointReader& r);
  void write_state(util::CheckpointWriter& w) const;
  void read_state(const util::CheckpointReader& r);

  TrainerConfig cfg_;
  std::string out_dir_;
  std::unique_ptr<agent::Agent> agent_;
  std::unique_ptr<env::BatchEnv> envs_;
  std::unique_ptr<ReplayBuffer> buffer_;
  std::unique_ptr<RewardNormalizer> normalizer_;
  std::unique_ptr<MetricsWriter> writer_;
  math::Rng rollout_rng_{0};
  math::Rng update_rng_{0};
  math::Rng replay_rng_{0};

  long env_steps_ = 0;
  long episodes_ = 0;
  long iteration_ = 0;
  Eigen::VectorXd episode_return_;    // per-instance running sum, raw
  std::vector<double> rollout_rc_;    // latest rollout's raw rc

  // Metrics window since the last emitted row.
  double window_violation_sum_ = 0.0;
  long window_steps_ = 0;
  long window_episodes_ = 0;
  long window_successes_ = 0;
  double window_return_sum_ = 0.0;
  // Episode stats carry forward across windows that finish no episode.
  double carry_success_rate_ = 0.0;
  double carry_mean_return_ = 0.0;
  // One summary per emitted row; feeds the trailing-10% SWU window.
  struct WindowSummary {
    double cum_steps, steps, violation_sum, episodes, successes, return_sum;
  };
  std::vector<WindowSummary> history_;
  std::vector<MetricsRow> rows_;
  long next_metrics_at_ = 0;
  long next_checkpoint_at_ = 0;

  int consecutive_aborts_ = 0;
  long total_aborts_ = 0;
  std::vector<std::string> last_stages_;

  double wall_offset_ = 0.0;  // wall seconds accumulated before a resume
  std::chrono::steady_clock::time_point start_;
};

struct EvalEpisode {
  long steps = 0;
  double episode_return = 0.0;
  double violation_sum = 0.0;  // sum of -rc_raw
  bool success = false;
};

struct EvalReport {
  std::vector<EvalEpisode> episodes;
  double success_rate = 0.0;
  double mean_return = 0.0;
  double violation_rate = 0.0;  // -mean rc over all eval steps
};

// Deterministic-policy evaluation of a saved checkpoint. Episode seeds
// derive from `seed` when given, else from the checkpoint's config seed.
EvalReport evaluate_checkpoint(const std::string& checkpoint_prefix,
                               int episodes,
                               std::optional<std::uint64_t> seed);

}  // namespace seditor::train
