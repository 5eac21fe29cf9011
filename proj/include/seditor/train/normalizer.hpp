#pragma once

#include <Eigen/Core>

#include "seditor/util/checkpoint.hpp"

namespace seditor::train {

// Running standardizer for the two reward channels, fed at batch-sample
// time. Each call normalizes with the statistics accumulated so far and
// only then folds the new value in, so a value never standardizes
// against itself. Means/variances are debiased EMAs (Adam-style: raw
// accumulators divided by the geometric weight sum), and outputs are
// clipped to +-clip.
class RewardNormalizer {
 public:
  RewardNormalizer(double decay, double clip);

  double normalize_reward(double x) { return apply(0, x); }
  double normalize_constraint(double x) { return apply(1, x); }

  void save(util::CheckpointWriter& w, const std::string& prefix) const;
  void load(const util::CheckpointReader& r, const std::string& prefix);
  Eigen::VectorXd state() const;          // for snapshot/rollback
  void restore(const Eigen::VectorXd& s);

 private:
  double apply(int channel, double x);

  double decay_;
  double clip_;
  // Per channel: first moment, second moment, accumulated weight.
  double m1_[2] = {0.0, 0.0};
  double m2_[2] = {0.0, 0.0};
  double weight_[2] = {0.0, 0.0};
};

}  // namespace seditor::train
