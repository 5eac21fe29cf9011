#include "seditor/train/normalizer.hpp"

#include <algorithm>
#include <cmath>

#include "seditor/math/scalar.hpp"
#include "seditor/util/error.hpp"

namespace seditor::train {

RewardNormalizer::RewardNormalizer(double decay, double clip)
    : decay_(decay), clip_(clip) {
  if (!(decay >= 0.0 && decay < 1.0)) throw Error("normalizer decay must be in [0, 1)");
  if (clip <= 0.0) throw Error("normalizer clip must be > 0");
}

double RewardNormalizer::apply(int channel, double x) {
  double normalized;
  if (weight_[channel] <= 0.0) {
    normalized = 0.0;  // no statistics yet
  } else {
    const double mean = m1_[channel] / weight_[channel];
    const double var =
        std::max(0.0, m2_[channel] / weight_[channel] - mean * mean);
    const double stddev = std::sqrt(var);
    normalized = (x - mean) / std::max(stddev, 1e-6);
    normalized = math::clip(normalized, -clip_, clip_);
  }
  m1_[channel] = decay_ * m1_[channel] + (1.0 - decay_) * x;
  m2_[channel] = decay_ * m2_[channel] + (1.0 - decay_) * x * x;
  weight_[channel] = decay_ * weight_[channel] + (1.0 - decay_);
  return normalized;
}

Eigen::VectorXd RewardNormalizer::state() const {
  Eigen::VectorXd s(6);
  s << m1_[0], m2_[0], weight_[0], m1_[1], m2_[1], weight_[1];
  return s;
}

void RewardNormalizer::restore(const Eigen::VectorXd& s) {
  if (s.size() != 6) throw Error("normalizer state must have 6 entries");
  m1_[0] = s(0);
  m2_[0] = s(1);
  weight_[0] = s(2);
  m1_[1] = s(3);
  m2_[1] = s(4);
  weight_[1] = s(5);
}

void RewardNormalizer::save(util::CheckpointWriter& w,
                            const std::string& prefix) const {
  w.add_vector(prefix + ".state", state());
}

void RewardNormalizer::load(const util::CheckpointReader& r,
                            const std::string& prefix) {
  restore(r.vector(prefix + ".state", 6));
}

}  // namespace seditor::train
