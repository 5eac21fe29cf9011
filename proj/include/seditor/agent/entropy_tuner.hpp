#pragma once

#include <cmath>

namespace seditor::agent {

// SAC-style temperature duals for the two policies. Targets are stated
// per action dimension (the usual convention), so the effective target
// compared against a policy's full entropy is target * act_dim.
// The rule log_alpha -= lr * (entropy_estimate - effective_target)
// raises the temperature when entropy falls below target and lowers it
// when exploration is already plentiful.
class EntropyTuner {
 public:
  EntropyTuner(double target_per_dim_um, double target_per_dim_se,
               int act_dim, double lr)
      : target_um_(target_per_dim_um * act_dim),
        target_se_(target_per_dim_se * act_dim),
        lr_(lr) {}

  double alpha_um() const { return std::exp(log_alpha_um_); }
  double alpha_se() const { return std::exp(log_alpha_se_); }

  double log_alpha_um() const { return log_alpha_um_; }
  double log_alpha_se() const { return log_alpha_se_; }
  void set_log_alpha_um(double v) { log_alpha_um_ = v; }
  void set_log_alpha_se(double v) { log_alpha_se_ = v; }

  void step_um(double entropy_estimate) {
    log_alpha_um_ -= lr_ * (entropy_estimate - target_um_);
  }
  void step_se(double entropy_estimate) {
    log_alpha_se_ -= lr_ * (entropy_estimate - target_se_);
  }

 private:
  double log_alpha_um_ = 0.0;
  double log_alpha_se_ = 0.0;
  double target_um_ = 0.0;
  double target_se_ = 0.0;
  double lr_ = 0.0;
};

}  // namespace seditor::agent
