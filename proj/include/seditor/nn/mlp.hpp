#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "seditor/math/rng.hpp"

namespace seditor::nn {

enum class Activation { kTanh, kRelu, kLinear };

struct LayerSpec {
  int in = 0;
  int out = 0;
  Activation act = Activation::kLinear;
};

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Fully connected network with every parameter in one flat vector:
// per layer the row-major weight block, then the bias. Optimizers,
// checkpoints and finite-difference oracles all treat the network as a
// point in R^n, so there is no per-layer parameter bookkeeping anywhere
// else. Batches are stored column-wise (one sample per column).
//
// Mutation goes through init/set_params/storage(), each of which bumps
// a version counter; backward passes refuse caches recorded
// under an older version instead of silently using stale activations.
class Mlp {
 public:
  Mlp() = default;

  // Hidden layers share one activation; the output layer is linear so
  // distribution heads and critics can interpret raw values.
  Mlp(int in_dim, const std::vector<int>& hidden, int out_dim,
      Activation hidden_act);

  int in_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  int out_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
  Eigen::Index param_count() const { return params_.size(); }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  std::uint64_t version() const { return version_; }

  // Uniform(-s, s) weights with s = sqrt(6 / (fan_in + fan_out)), zero
  // biases. Draw order is row-major per weight so init is reproducible.
  void init(math::Rng& rng);

  const Eigen::VectorXd& params() const { return params_; }
  void set_params(const Eigen::VectorXd& p);
  // In-place update entry point (optimizer steps); bumps the version.
  Eigen::VectorXd& storage() {
    ++version_;
    return params_;
  }

  Eigen::Map<const RowMajorMatrix> weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;

 private:
  std::vector<LayerSpec> layers_;
  std::vector<Eigen::Index> offsets_;  // start of each layer's block
  Eigen::VectorXd params_;
  std::uint64_t version_ = 0;
};

// Activations recorded by forward() and consumed by backward().
struct ForwardCache {
  const Mlp* net = nullptr;
  std::uint64_t version = 0;
  Eigen::MatrixXd input;
  std::vector<Eigen::MatrixXd> pre;   // pre-activation per layer
  std::vector<Eigen::MatrixXd> post;  // activation per layer
};

// Returns out_dim x batch outputs for in_dim x batch inputs.
Eigen::MatrixXd forward(const Mlp& net, const Eigen::MatrixXd& input,
                        ForwardCache* cache = nullptr);

struct BackwardResult {
  Eigen::VectorXd param_grad;  // flat, same layout as Mlp::params()
  Eigen::MatrixXd input_grad;  // in_dim x batch
};

// Pure chain rule: output_grad is dL/d(output), out_dim x batch, with any
// batch averaging already applied by the caller.
BackwardResult backward(const ForwardCache& cache,
                        const Eigen::MatrixXd& output_grad);

// target <- (1 - tau) * target + tau * source; networks must share shape.
void polyak_update(Mlp& target, const Mlp& source, double tau);

}  // namespace seditor::nn
