#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seditor/train/metrics.hpp"

namespace seditor::train {

struct PlotSeries {
  std::string label;
  std::vector<MetricsRow> rows;
};

// Three stacked panels over env_steps: success rate, mean episode
// return, and violation rate on a log axis (values floored at 1e-6 for
// display). Series overlay with a shared legend; violation_target, when
// given, draws a dashed horizontal budget line on the violation panel.
std::string render_metrics_svg(const std::vector<PlotSeries>& series,
                               std::optional<double> violation_target);

}  // namespace seditor::train
