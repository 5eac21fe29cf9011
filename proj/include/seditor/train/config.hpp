#pragma once

#include <cstdint>
#include <string>

namespace seditor::train {

// Flat key = value training configuration. Defaults are desk scale
// (small nets, small buffer, minutes not hours); configs/paper.cfg keeps
// the full-scale values. Unknown keys are rejected, every field is
// validated, and to_text() emits a canonical round-trippable form that
// checkpoints embed so evaluation and resume never need the original
// file.
struct TrainerConfig {
  // required
  std::string env;    // bandit | pointnav
  std::string agent;  // seditor | sac | sac_lag
  long total_steps = -1;

  // algorithm
  std::string edit_mode = "additive";    // additive | overwrite
  std::string distance_mode = "hinge";   // hinge | l2
  std::string head = "beta";             // beta | squashed_gaussian
  int actor_width = 1;                   // 1 | 2, hidden-unit multiplier
  int hidden_layers = 2;
  int hidden_units = 64;
  double gamma = 0.99;
  double c = 5e-4;  // per-step violation budget
  double lr = 3e-4;
  double lr_lambda = 0.01;
  double tau = 5e-3;
  double entropy_target_um = -1.609;  // nats per action dimension
  double entropy_target_se = -1.609;
  double initial_lambda = 1.0;
  bool twin_q = false;
  bool simple_lambda_rule = false;
  double min_concentration = 1.0;

  // harness
  int batch_size = 256;
  int parallel_envs = 8;
  int train_interval = 5;  // env steps per instance between iterations
  long initial_rollout = 2000;
  long buffer_capacity = 200000;
  int n_step = 1;
  double normalizer_decay = 0.999;
  double normalizer_clip = 10.0;
  std::uint64_t seed = 0;
  long metrics_interval_steps = 0;     // 0: one row per iteration
  long checkpoint_interval_steps = 0;  // 0: final checkpoint only
  double swu_baseline_utility = 1.0;
  std::string utility_metric = "return";  // return | success

  // pointnav
  int horizon = 200;
  int hazard_count = 4;
  int lidar_bins = 16;

  static TrainerConfig parse(const std::string& text);
  static TrainerConfig load_file(const std::string& path);
  std::string to_text() const;
  void validate() const;
};

}  // namespace seditor::train
