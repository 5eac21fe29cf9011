#include "seditor/env/pointnav.hpp"

#include <cmath>
#include <numbers>

#include "seditor/math/scalar.hpp"
#include "seditor/util/error.hpp"

namespace seditor::env {

PointNavEnv::PointNavEnv(int hazard_count, int horizon, int lidar_bins)
    : hazard_count_(hazard_count), lidar_bins_(lidar_bins) {
  if (hazard_count < 0) throw ConfigError("hazard_count must be >= 0");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (lidar_bins < 1) throw ConfigError("lidar_bins must be >= 1");
  spec_ = EnvSpec{4 + lidar_bins, 2, 1.0, horizon};
  hazards_.assign(hazard_count_, Eigen::Vector2d::Zero());
}

Eigen::Vector2d PointNavEnv::sample_point(math::Rng& rng) const {
  // Keep disc centers far enough from the walls that discs stay inside.
  const double lim = kWorldHalf - kHazardRadius;
  return {rng.uniform(-lim, lim), rng.uniform(-lim, lim)};
}

Eigen::VectorXd PointNavEnv::reset(std::uint64_t seed) {
  math::Rng rng(seed);
  // Hazards are unconstrained (they may overlap each other); agent and
  // goal are rejection-sampled clear of hazards, and apart from each
  // other so episodes are not trivially short.
  for (auto& h : hazards_) h = sample_point(rng);

  const auto clear_of_hazards = [&](const Eigen::Vector2d& p, double margin) {
    for (const auto& h : hazards_) {
      if ((p - h).norm() <= margin) return false;
    }
    return true;
  };

  constexpr int kMaxTries = 10000;
  int tries = 0;
  do {
    agent_ = sample_point(rng);
    if (++tries > kMaxTries) throw Error("PointNav reset: agent placement failed");
  } while (!clear_of_hazards(agent_, kAgentRadius + kHazardRadius + 0.05));

  tries = 0;
  do {
    goal_ = sample_point(rng);
    if (++tries > kMaxTries) throw Error("PointNav reset: goal placement failed");
  } while (!clear_of_hazards(goal_, kGoalRadius + kHazardRadius) ||
           (goal_ - agent_).norm() <= 1.0);

  t_ = 0;
  return observe();
}

StepResult PointNavEnv::step(const Eigen::VectorXd& action) {
  if (action.size() != 2) throw DimensionError("PointNav: action size must be 2");

  const double dist_before = (agent_ - goal_).norm();
  for (int i = 0; i < 2; ++i) {
    agent_(i) = math::clip(agent_(i) + kStepScale * math::clip(action(i), -1.0, 1.0),
                           -kWorldHalf, kWorldHalf);
  }
  const double dist_after = (agent_ - goal_).norm();
  t_ += 1;

  StepResult r;
  r.reward = dist_before - dist_after;
  for (const auto& h : hazards_) {
    if ((agent_ - h).norm() < kAgentRadius + kHazardRadius) {
      r.constraint_reward = -1.0;
      break;
    }
  }
  if (dist_after < kGoalRadius) {
    r.success = true;
    r.terminal = true;
    r.reward += kSuccessBonus;
  } else if (t_ >= spec_.horizon) {
    r.timeout = true;
  }
  r.obs = observe();
  return r;
}

Eigen::VectorXd PointNavEnv::lidar() const {
  Eigen::VectorXd bins = Eigen::VectorXd::Zero(lidar_bins_);
  for (int k = 0; k < lidar_bins_; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / lidar_bins_;
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& h : hazards_) {
      const Eigen::Vector2d v = h - agent_;
      const double b = v.dot(dir);
      const double disc = b * b - (v.squaredNorm() - kHazardRadius * kHazardRadius);
      if (disc < 0.0) continue;
      const double s = std::sqrt(disc);
      if (b + s < 0.0) continue;       // disc entirely behind the ray
      nearest = std::min(nearest, std::max(b - s, 0.0));
    }
    if (std::isfinite(nearest)) {
      bins(k) = std::max(0.0, (kLidarRange - nearest) / kLidarRange);
    }
  }
  return bins;
}

Eigen::VectorXd PointNavEnv::observe() const {
  Eigen::VectorXd obs(spec_.obs_dim);
  obs.segment<2>(0) = agent_;
  obs.segment<2>(2) = goal_ - agent_;
  obs.segment(4, lidar_bins_) = lidar();
  return obs;
}

std::vector<double> PointNavEnv::state() const {
  std::vector<double> s;
  s.reserve(5 + 2 * hazards_.size());
  s.push_back(static_cast<double>(t_));
  s.push_back(agent_.x());
  s.push_back(agent_.y());
  s.push_back(goal_.x());
  s.push_back(goal_.y());
  for (const auto& h : hazards_) {
    s.push_back(h.x());
    s.push_back(h.y());
  }
  return s;
}

void PointNavEnv::restore(const std::vector<double>& state) {
  if (state.size() != 5 + 2 * hazards_.size()) {
    throw CheckpointError("PointNav restore: state size mismatch");
  }
  t_ = static_cast<int>(state[0]);
  agent_ = {state[1], state[2]};
  goal_ = {state[3], state[4]};
  for (std::size_t i = 0; i < hazards_.size(); ++i) {
    hazards_[i] = {state[5 + 2 * i], state[6 + 2 * i]};
  }
}

}  // namespace seditor::env
