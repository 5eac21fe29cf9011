#include "seditor/train/replay_buffer.hpp"

#include <utility>

#include "seditor/util/error.hpp"

namespace seditor::train {

ReplayBuffer::ReplayBuffer(long capacity) : capacity_(capacity) {
  if (capacity < 1) throw ConfigError("replay capacity must be >= 1");
  slots_.reserve(static_cast<std::size_t>(capacity));
}

void ReplayBuffer::push(Transition t) {
  const long slot = total_pushed_ % capacity_;
  if (size() < capacity_) {
    slots_.push_back(std::move(t));
  } else {
    slots_[static_cast<std::size_t>(slot)] = std::move(t);
  }
  ++total_pushed_;
}

const Transition& ReplayBuffer::at_absolute(long index) const {
  if (index < total_pushed_ - size() || index >= total_pushed_) {
    throw Error("replay index " + std::to_string(index) +
                      " outside live range");
  }
  return slots_[static_cast<std::size_t>(index % capacity_)];
}

long ReplayBuffer::sample_absolute(math::Rng& rng) const {
  if (slots_.empty()) throw Error("cannot sample from empty replay buffer");
  const long oldest = total_pushed_ - size();
  return oldest + static_cast<long>(rng.uniform_index(slots_.size()));
}

void ReplayBuffer::save(util::CheckpointWriter& w, const std::string& prefix) const {
  const long n = size();
  w.add_scalar(prefix + ".capacity", static_cast<double>(capacity_));
  w.add_scalar(prefix + ".total", static_cast<double>(total_pushed_));
  w.add_scalar(prefix + ".size", static_cast<double>(n));
  if (n == 0) return;
  const Eigen::Index obs_dim = slots_[0].obs.size();
  const Eigen::Index act_dim = slots_[0].act.size();
  Eigen::MatrixXd obs(obs_dim, n);
  Eigen::MatrixXd act(act_dim, n);
  Eigen::MatrixXd next_obs(obs_dim, n);
  Eigen::VectorXd reward(n);
  Eigen::VectorXd constraint(n);
  Eigen::MatrixXd flags(2, n);
  for (long i = 0; i < n; ++i) {
    const Transition& t = slots_[static_cast<std::size_t>(i)];
    obs.col(i) = t.obs;
    act.col(i) = t.act;
    next_obs.col(i) = t.next_obs;
    reward(i) = t.reward;
    constraint(i) = t.constraint_reward;
    flags(0, i) = t.terminal ? 1.0 : 0.0;
    flags(1, i) = t.timeout ? 1.0 : 0.0;
  }
  w.add_matrix(prefix + ".obs", obs);
  w.add_matrix(prefix + ".act", act);
  w.add_matrix(prefix + ".next_obs", next_obs);
  w.add_vector(prefix + ".reward", reward);
  w.add_vector(prefix + ".constraint", constraint);
  w.add_matrix(prefix + ".flags", flags);
}

void ReplayBuffer::load(const util::CheckpointReader& r, const std::string& prefix) {
  const long capacity = static_cast<long>(r.scalar(prefix + ".capacity"));
  if (capacity != capacity_) {
    throw CheckpointError("replay capacity mismatch: checkpoint has " +
                                std::to_string(capacity) + ", configured " +
                                std::to_string(capacity_));
  }
  total_pushed_ = static_cast<long>(r.scalar(prefix + ".total"));
  const long n = static_cast<long>(r.scalar(prefix + ".size"));
  slots_.clear();
  if (n == 0) return;
  // Dimensions come from the stored arrays themselves.
  const long obs_dim = r.shape(prefix + ".obs").first;
  const long act_dim = r.shape(prefix + ".act").first;
  const Eigen::MatrixXd obs = r.matrix(prefix + ".obs", obs_dim, n);
  const Eigen::MatrixXd act = r.matrix(prefix + ".act", act_dim, n);
  const Eigen::MatrixXd next_obs = r.matrix(prefix + ".next_obs", obs_dim, n);
  const Eigen::VectorXd reward = r.vector(prefix + ".reward", n);
  const Eigen::VectorXd constraint = r.vector(prefix + ".constraint", n);
  const Eigen::MatrixXd flags = r.matrix(prefix + ".flags", 2, n);
  slots_.resize(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    Transition& t = slots_[static_cast<std::size_t>(i)];
    t.obs = obs.col(i);
    t.act = act.col(i);
    t.next_obs = next_obs.col(i);
    t.reward = reward(i);
    t.constraint_reward = constraint(i);
    t.terminal = flags(0, i) != 0.0;
    t.timeout = flags(1, i) != 0.0;
  }
}

}  // namespace seditor::train
