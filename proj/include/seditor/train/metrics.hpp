#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace seditor::train {

struct MetricsRow {
  long env_steps = 0;
  long episodes = 0;
  double success_rate = 0.0;
  double mean_episode_return = 0.0;
  double violation_rate = 0.0;  // -mean(rc_raw) over the window since the last row
  double lambda = 0.0;
  double alpha_um = 0.0;
  double alpha_se = 0.0;
  double swu = 0.0;  // trailing 10%-of-steps window
  double wall_time = 0.0;
};

// Column names, in MetricsRow field order.
extern const char* const kMetricsHeader;

// Appends rows as CSV; header goes out at open so even a zero-row run
// leaves a parseable file. Doubles are %.17g, so re-parsing reproduces
// the values bit-exactly.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);
  void emit(const MetricsRow& row);

 private:
  std::ofstream out_;
  std::string path_;
};

std::string format_metrics_row(const MetricsRow& row);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

// Safety-weighted utility: min{1, target/measured} * utility/utility_base.
// measured = 0 leaves the first factor at 1; utility_base must be > 0.
double compute_swu(double target_rate, double measured_rate, double utility,
                   double utility_unconstrained);

}  // namespace seditor::train
