#pragma once

#include <Eigen/Core>
#include <vector>

#include "seditor/math/rng.hpp"
#include "seditor/util/checkpoint.hpp"

namespace seditor::train {

struct Transition {
  Eigen::VectorXd obs;
  Eigen::VectorXd act;
  Eigen::VectorXd next_obs;
  double reward = 0.0;            // raw, unnormalized
  double constraint_reward = 0.0; // raw, unnormalized
  bool terminal = false;
  bool timeout = false;
};

// FIFO ring addressed by absolute insertion index, which stays valid as
// old entries are evicted: index k is available while
// total_pushed() - size() <= k < total_pushed(). Absolute addressing is
// what lets n-step assembly walk same-instance successors (a fixed
// stride apart) without caring where the ring wrapped.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(long capacity);

  void push(Transition t);
  long size() const { return static_cast<long>(slots_.size()); }
  long capacity() const { return capacity_; }
  long total_pushed() const { return total_pushed_; }

  const Transition& at_absolute(long index) const;
  // Uniform over current contents.
  long sample_absolute(math::Rng& rng) const;

  void save(util::CheckpointWriter& w, const std::string& prefix) const;
  void load(const util::CheckpointReader& r, const std::string& prefix);

 private:
  long capacity_;
  long total_pushed_ = 0;
  std::vector<Transition> slots_;
};

}  // namespace seditor::train
