#pragma once

#include <Eigen/Dense>
#include <string>

namespace seditor::agent {

// How the editor's output combines with the proposal into the executed
// action. Additive: a = clip(proposal + 2 * delta, -A, A); the factor 2
// lets the editor move any in-box proposal to any in-box target.
// Overwrite: a = delta, the proposal only informs the editor's input.
enum class EditMode { kAdditive, kOverwrite };

// Edit penalty. Hinge compares utility Q-values (penalize only edits
// that lower Q); L2 is the squared action displacement.
enum class DistanceMode { kHinge, kL2 };

EditMode parse_edit_mode(const std::string& text);
DistanceMode parse_distance_mode(const std::string& text);
const char* to_string(EditMode mode);
const char* to_string(DistanceMode mode);

// Applies the editing function elementwise. When pass_mask is given it
// receives, per dimension, 1.0 where the additive sum stayed inside the
// box and 0.0 where the clip saturated (the local gradient of the clip);
// overwrite mode fills it with ones since a = delta has unit gradient.
Eigen::VectorXd edit_action(EditMode mode, const Eigen::VectorXd& proposal,
                            const Eigen::VectorXd& delta, double bound,
                            Eigen::ArrayXd* pass_mask = nullptr);

}  // namespace seditor::agent
