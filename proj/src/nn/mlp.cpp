#include "seditor/nn/mlp.hpp"

#include <cmath>

#include "seditor/util/error.hpp"

namespace seditor::nn {
namespace {

Eigen::Index block_size(const LayerSpec& l) {
  return static_cast<Eigen::Index>(l.out) * l.in + l.out;
}

void apply_activation(Activation act, Eigen::MatrixXd& m) {
  switch (act) {
    case Activation::kTanh:
      m = m.array().tanh();
      break;
    case Activation::kRelu:
      m = m.array().max(0.0);
      break;
    case Activation::kLinear:
      break;
  }
}

// Derivative expressed through cached pre/post activations.
Eigen::ArrayXXd activation_deriv(Activation act, const Eigen::MatrixXd& pre,
                                 const Eigen::MatrixXd& post) {
  switch (act) {
    case Activation::kTanh:
      return 1.0 - post.array().square();
    case Activation::kRelu:
      return (pre.array() > 0.0).cast<double>();
    case Activation::kLinear:
      return Eigen::ArrayXXd::Ones(pre.rows(), pre.cols());
  }
  throw Error("unknown activation");
}

}  // namespace

Mlp::Mlp(int in_dim, const std::vector<int>& hidden, int out_dim,
         Activation hidden_act) {
  if (in_dim <= 0 || out_dim <= 0) {
    throw DimensionError("Mlp: in_dim and out_dim must be positive");
  }
  int prev = in_dim;
  for (int width : hidden) {
    if (width <= 0) throw DimensionError("Mlp: hidden width must be positive");
    layers_.push_back({prev, width, hidden_act});
    prev = width;
  }
  layers_.push_back({prev, out_dim, Activation::kLinear});

  Eigen::Index total = 0;
  for (const auto& l : layers_) {
    offsets_.push_back(total);
    total += block_size(l);
  }
  params_ = Eigen::VectorXd::Zero(total);
}

void Mlp::init(math::Rng& rng) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& spec = layers_[l];
    const double scale = std::sqrt(6.0 / (spec.in + spec.out));
    double* w = params_.data() + offsets_[l];
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(spec.out) * spec.in;
         ++i) {
      w[i] = rng.uniform(-scale, scale);
    }
    // biases stay zero
  }
  ++version_;
}

void Mlp::set_params(const Eigen::VectorXd& p) {
  if (p.size() != params_.size()) {
    throw DimensionError("Mlp::set_params: size mismatch");
  }
  params_ = p;
  ++version_;
}

Eigen::Map<const RowMajorMatrix> Mlp::weight(int layer) const {
  const auto& spec = layers_.at(layer);
  return {params_.data() + offsets_[layer], spec.out, spec.in};
}

Eigen::Map<const Eigen::VectorXd> Mlp::bias(int layer) const {
  const auto& spec = layers_.at(layer);
  return {params_.data() + offsets_[layer] +
              static_cast<Eigen::Index>(spec.out) * spec.in,
          spec.out};
}

Eigen::MatrixXd forward(const Mlp& net, const Eigen::MatrixXd& input,
                        ForwardCache* cache) {
  if (input.rows() != net.in_dim()) {
    throw DimensionError("forward: input rows do not match net in_dim");
  }
  if (cache != nullptr) {
    cache->net = &net;
    cache->version = net.version();
    cache->input = input;
    cache->pre.clear();
    cache->post.clear();
  }
  Eigen::MatrixXd h = input;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    Eigen::MatrixXd z = net.weight(static_cast<int>(l)) * h;
    z.colwise() += net.bias(static_cast<int>(l));
    if (cache != nullptr) cache->pre.push_back(z);
    apply_activation(net.layers()[l].act, z);
    if (cache != nullptr) cache->post.push_back(z);
    h = std::move(z);
  }
  return h;
}

BackwardResult backward(const ForwardCache& cache,
                        const Eigen::MatrixXd& output_grad) {
  const Mlp* net = cache.net;
  if (net == nullptr) throw Error("backward: cache was never filled");
  if (cache.version != net->version()) {
    throw Error("backward: cache is stale, parameters changed since forward");
  }
  if (output_grad.rows() != net->out_dim() ||
      output_grad.cols() != cache.input.cols()) {
    throw DimensionError("backward: output_grad shape mismatch");
  }

  BackwardResult result;
  result.param_grad = Eigen::VectorXd::Zero(net->param_count());

  const auto& layers = net->layers();
  Eigen::MatrixXd g = output_grad;
  Eigen::Index offset = net->param_count();
  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const auto& spec = layers[l];
    const Eigen::MatrixXd& below =
        (l == 0) ? cache.input : cache.post[static_cast<std::size_t>(l) - 1];

    Eigen::MatrixXd gz =
        (g.array() * activation_deriv(spec.act, cache.pre[l], cache.post[l]))
            .matrix();

    offset -= block_size(spec);
    double* block = result.param_grad.data() + offset;
    Eigen::Map<RowMajorMatrix> dw(block, spec.out, spec.in);
    dw = gz * below.transpose();
    Eigen::Map<Eigen::VectorXd> db(
        block + static_cast<Eigen::Index>(spec.out) * spec.in, spec.out);
    db = gz.rowwise().sum();

    g = net->weight(l).transpose() * gz;
  }
  result.input_grad = std::move(g);
  return result;
}

void polyak_update(Mlp& target, const Mlp& source, double tau) {
  if (target.param_count() != source.param_count()) {
    throw DimensionError("polyak_update: parameter count mismatch");
  }
  target.storage() = (1.0 - tau) * target.params() + tau * source.params();
}

}  // namespace seditor::nn
