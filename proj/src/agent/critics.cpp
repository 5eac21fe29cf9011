#include "seditor/agent/critics.hpp"

#include "seditor/util/error.hpp"

namespace seditor::agent {

Critics::Critics(const CriticsConfig& cfg, math::Rng& init_rng) : cfg_(cfg) {
  if (cfg.obs_dim < 1 || cfg.act_dim < 1) {
    throw DimensionError("Critics: obs_dim and act_dim must be positive");
  }
  if (!(cfg.tau > 0.0) || cfg.tau > 1.0) {
    throw ConfigError("Critics: tau must be in (0, 1]");
  }
  const int in_dim = cfg.obs_dim + cfg.act_dim;
  for (int k = 0; k < twin_count(); ++k) {
    q_.emplace_back(in_dim, cfg.hidden, 1, nn::Activation::kTanh);
    q_.back().init(init_rng);
    qc_.emplace_back(in_dim, cfg.hidden, 1, nn::Activation::kTanh);
    qc_.back().init(init_rng);
  }
  // Targets start as exact copies of the live networks.
  q_tgt_ = q_;
  qc_tgt_ = qc_;
  for (int k = 0; k < twin_count(); ++k) {
    q_opt_.emplace_back(q_[k].param_count());
    qc_opt_.emplace_back(qc_[k].param_count());
  }
}

Eigen::VectorXd Critics::min_value(const std::vector<nn::Mlp>& nets,
                                   const Eigen::MatrixXd& input) {
  Eigen::VectorXd value = forward(nets[0], input).row(0).transpose();
  for (std::size_t k = 1; k < nets.size(); ++k) {
    value = value.cwiseMin(forward(nets[k], input).row(0).transpose());
  }
  return value;
}

Eigen::VectorXd Critics::q_value(const Eigen::MatrixXd& input) const {
  return min_value(q_, input);
}
Eigen::VectorXd Critics::qc_value(const Eigen::MatrixXd& input) const {
  return min_value(qc_, input);
}
Eigen::VectorXd Critics::q_target(const Eigen::MatrixXd& input) const {
  return min_value(q_tgt_, input);
}
Eigen::VectorXd Critics::qc_target(const Eigen::MatrixXd& input) const {
  return min_value(qc_tgt_, input);
}

Eigen::MatrixXd Critics::weighted_input_grad(const std::vector<nn::Mlp>& nets,
                                             const Eigen::MatrixXd& input,
                                             const Eigen::VectorXd& weights) {
  if (weights.size() != input.cols()) {
    throw DimensionError("critic input grad: weight count mismatch");
  }
  if (nets.size() == 1) {
    nn::ForwardCache cache;
    forward(nets[0], input, &cache);
    return backward(cache, weights.transpose()).input_grad;
  }
  // Twin minimum: route each sample's weight to its argmin network
  // (ties to the first), the subgradient of min.
  std::vector<nn::ForwardCache> caches(nets.size());
  Eigen::MatrixXd values(nets.size(), input.cols());
  for (std::size_t k = 0; k < nets.size(); ++k) {
    values.row(static_cast<Eigen::Index>(k)) =
        forward(nets[k], input, &caches[k]).row(0);
  }
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(input.rows(), input.cols());
  for (std::size_t k = 0; k < nets.size(); ++k) {
    Eigen::MatrixXd routed = Eigen::MatrixXd::Zero(1, input.cols());
    bool any = false;
    for (Eigen::Index j = 0; j < input.cols(); ++j) {
      Eigen::Index argmin = 0;
      values.col(j).minCoeff(&argmin);
      if (argmin == static_cast<Eigen::Index>(k)) {
        routed(0, j) = weights(j);
        any = true;
      }
    }
    if (any) grad += backward(caches[k], routed).input_grad;
  }
  return grad;
}

Eigen::MatrixXd Critics::q_input_grad(const Eigen::MatrixXd& input,
                                      const Eigen::VectorXd& weights) const {
  return weighted_input_grad(q_, input, weights);
}
Eigen::MatrixXd Critics::qc_input_grad(const Eigen::MatrixXd& input,
                                       const Eigen::VectorXd& weights) const {
  return weighted_input_grad(qc_, input, weights);
}

double Critics::mse_step(nn::Mlp& net, nn::AdamState& opt,
                         const Eigen::MatrixXd& input,
                         const Eigen::VectorXd& target, double lr) {
  nn::ForwardCache cache;
  const Eigen::VectorXd pred = forward(net, input, &cache).row(0).transpose();
  const Eigen::VectorXd err = pred - target;
  const double loss = err.squaredNorm() / static_cast<double>(err.size());
  if (!std::isfinite(loss)) throw NumericError("critic loss is not finite");
  const Eigen::MatrixXd output_grad =
      (2.0 / static_cast<double>(err.size())) * err.transpose();
  adam_step(opt, net, backward(cache, output_grad).param_grad, lr);
  return loss;
}

CriticLosses Critics::update(const Eigen::MatrixXd& input,
                             const Eigen::VectorXd& target_q,
                             const Eigen::VectorXd& target_qc, double lr) {
  if (target_q.size() != input.cols() || target_qc.size() != input.cols()) {
    throw DimensionError("Critics::update: target size mismatch");
  }
  CriticLosses losses;
  for (int k = 0; k < twin_count(); ++k) {
    losses.q += mse_step(q_[k], q_opt_[k], input, target_q, lr);
    losses.qc += mse_step(qc_[k], qc_opt_[k], input, target_qc, lr);
  }
  losses.q /= twin_count();
  losses.qc /= twin_count();
  return losses;
}

void Critics::sync_targets() {
  for (int k = 0; k < twin_count(); ++k) {
    polyak_update(q_tgt_[k], q_[k], cfg_.tau);
    polyak_update(qc_tgt_[k], qc_[k], cfg_.tau);
  }
}

namespace {

void save_opt(util::CheckpointWriter& w, const std::string& name,
              const nn::AdamState& opt) {
  w.add_vector(name + ".m", opt.m);
  w.add_vector(name + ".v", opt.v);
  w.add_scalar(name + ".t", static_cast<double>(opt.t));
}

void load_opt(const util::CheckpointReader& r, const std::string& name,
              nn::AdamState& opt) {
  opt.m = r.vector(name + ".m", opt.m.size());
  opt.v = r.vector(name + ".v", opt.v.size());
  opt.t = static_cast<long>(r.scalar(name + ".t"));
}

}  // namespace

void Critics::save(util::CheckpointWriter& w, const std::string& prefix) const {
  for (int k = 0; k < twin_count(); ++k) {
    const std::string n = prefix + "." + std::to_string(k);
    w.add_vector(n + ".q", q_[k].params());
    w.add_vector(n + ".qc", qc_[k].params());
    w.add_vector(n + ".q_target", q_tgt_[k].params());
    w.add_vector(n + ".qc_target", qc_tgt_[k].params());
    save_opt(w, n + ".q_opt", q_opt_[k]);
    save_opt(w, n + ".qc_opt", qc_opt_[k]);
  }
}

void Critics::load(const util::CheckpointReader& r, const std::string& prefix) {
  for (int k = 0; k < twin_count(); ++k) {
    const std::string n = prefix + "." + std::to_string(k);
    q_[k].set_params(r.vector(n + ".q", q_[k].param_count()));
    qc_[k].set_params(r.vector(n + ".qc", qc_[k].param_count()));
    q_tgt_[k].set_params(r.vector(n + ".q_target", q_tgt_[k].param_count()));
    qc_tgt_[k].set_params(r.vector(n + ".qc_target", qc_tgt_[k].param_count()));
    load_opt(r, n + ".q_opt", q_opt_[k]);
    load_opt(r, n + ".qc_opt", qc_opt_[k]);
  }
}

}  // namespace seditor::agent
