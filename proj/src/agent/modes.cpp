#include "seditor/agent/modes.hpp"

#include "seditor/util/error.hpp"

namespace seditor::agent {

EditMode parse_edit_mode(const std::string& text) {
  if (text == "additive") return EditMode::kAdditive;
  if (text == "overwrite") return EditMode::kOverwrite;
  throw ConfigError("edit_mode must be 'additive' or 'overwrite', got '" +
                    text + "'");
}

DistanceMode parse_distance_mode(const std::string& text) {
  if (text == "hinge") return DistanceMode::kHinge;
  if (text == "l2") return DistanceMode::kL2;
  throw ConfigError("distance_mode must be 'hinge' or 'l2', got '" + text +
                    "'");
}

const char* to_string(EditMode mode) {
  return mode == EditMode::kAdditive ? "additive" : "overwrite";
}

const char* to_string(DistanceMode mode) {
  return mode == DistanceMode::kHinge ? "hinge" : "l2";
}

Eigen::VectorXd edit_action(EditMode mode, const Eigen::VectorXd& proposal,
                            const Eigen::VectorXd& delta, double bound,
                            Eigen::ArrayXd* pass_mask) {
  if (proposal.size() != delta.size()) {
    throw DimensionError("edit_action: proposal/delta size mismatch");
  }
  if (pass_mask != nullptr) *pass_mask = Eigen::ArrayXd::Ones(delta.size());
  if (mode == EditMode::kOverwrite) return delta;

  Eigen::VectorXd a(proposal.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double raw = proposal(i) + 2.0 * delta(i);
    if (raw > bound) {
      a(i) = bound;
      if (pass_mask != nullptr) (*pass_mask)(i) = 0.0;
    } else if (raw < -bound) {
      a(i) = -bound;
      if (pass_mask != nullptr) (*pass_mask)(i) = 0.0;
    } else {
      a(i) = raw;
    }
  }
  return a;
}

}  // namespace seditor::agent
