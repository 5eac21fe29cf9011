#include "seditor/env/batch_env.hpp"

#include "seditor/math/rng.hpp"
#include "seditor/util/error.hpp"

namespace seditor::env {

BatchEnv::BatchEnv(const Factory& factory, int instances,
                   std::uint64_t master_seed)
    : master_seed_(master_seed) {
  if (instances < 1) throw ConfigError("BatchEnv: need at least one instance");
  envs_.reserve(instances);
  for (int i = 0; i < instances; ++i) envs_.push_back(factory());
  episode_.assign(instances, 0);
  obs_.resize(spec().obs_dim, instances);
  for (int i = 0; i < instances; ++i) {
    obs_.col(i) = envs_[i]->reset(episode_seed(i, 0));
  }
}

std::uint64_t BatchEnv::episode_seed(int instance, long episode) const {
  return math::derive_seed(master_seed_, static_cast<std::uint64_t>(instance),
                           static_cast<std::uint64_t>(episode));
}

std::vector<StepResult> BatchEnv::step(const Eigen::MatrixXd& actions) {
  if (actions.cols() != size() || actions.rows() != spec().act_dim) {
    throw DimensionError("BatchEnv::step: actions must be act_dim x instances");
  }
  std::vector<StepResult> results;
  results.reserve(envs_.size());
  for (int i = 0; i < size(); ++i) {
    StepResult r = envs_[i]->step(actions.col(i));
    if (r.terminal || r.timeout) {
      episode_[i] += 1;
      obs_.col(i) = envs_[i]->reset(episode_seed(i, episode_[i]));
    } else {
      obs_.col(i) = r.obs;
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<double> BatchEnv::state() const {
  std::vector<double> out;
  for (int i = 0; i < size(); ++i) {
    out.push_back(static_cast<double>(episode_[i]));
    const std::vector<double> env_state = envs_[i]->state();
    out.push_back(static_cast<double>(env_state.size()));
    out.insert(out.end(), env_state.begin(), env_state.end());
    for (int r = 0; r < obs_.rows(); ++r) out.push_back(obs_(r, i));
  }
  return out;
}

void BatchEnv::restore(const std::vector<double>& state) {
  std::size_t pos = 0;
  const auto take = [&]() {
    if (pos >= state.size()) throw CheckpointError("BatchEnv restore: truncated state");
    return state[pos++];
  };
  for (int i = 0; i < size(); ++i) {
    episode_[i] = static_cast<long>(take());
    const auto env_len = static_cast<std::size_t>(take());
    std::vector<double> env_state(env_len);
    for (auto& v : env_state) v = take();
    envs_[i]->restore(env_state);
    for (int r = 0; r < obs_.rows(); ++r) obs_(r, i) = take();
  }
  if (pos != state.size()) throw CheckpointError("BatchEnv restore: trailing data");
}

}  // namespace seditor::env
