#pragma once

#include "seditor/env/env.hpp"
#include "seditor/math/rng.hpp"

namespace seditor::env {

// Randomized 2D navigation in the world box [-2, 2]^2. The agent (radius
// 0.1) steers toward a goal disc (radius 0.3) through penetrable hazard
// discs (radius 0.3): overlapping a hazard costs constraint reward -1
// but does not block motion. Utility reward is the per-step decrement of
// the goal distance plus a +1 bonus on reaching the goal, which
// disambiguates loitering next to it. Observations are the agent
// position, the goal offset and a ring of hazard-proximity lidar bins.
class PointNavEnv : public CmdpEnv {
 public:
  PointNavEnv(int hazard_count, int horizon, int lidar_bins);

  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(std::uint64_t seed) override;
  StepResult step(const Eigen::VectorXd& action) override;
  std::vector<double> state() const override;
  void restore(const std::vector<double>& state) override;

  static constexpr double kWorldHalf = 2.0;
  static constexpr double kAgentRadius = 0.1;
  static constexpr double kGoalRadius = 0.3;
  static constexpr double kHazardRadius = 0.3;
  static constexpr double kStepScale = 0.1;
  static constexpr double kLidarRange = 3.0;
  static constexpr double kSuccessBonus = 1.0;

  // Proximity reading per bin: a ray from the agent along the bin-center
  // angle, max(0, (R - distance_to_first_hazard_surface) / R). A wide or
  // near hazard intersects several bin rays and therefore covers
  // several bins.
  Eigen::VectorXd lidar() const;

 private:
  Eigen::VectorXd observe() const;
  Eigen::Vector2d sample_point(math::Rng& rng) const;

  EnvSpec spec_;
  int hazard_count_;
  int lidar_bins_;
  int t_ = 0;
  Eigen::Vector2d agent_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d goal_ = Eigen::Vector2d::Zero();
  std::vector<Eigen::Vector2d> hazards_;
};

}  // namespace seditor::env
