#include "seditor/train/metrics.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "seditor/util/error.hpp"

namespace seditor::train {

const char* const kMetricsHeader =
    "env_steps,episodes,success_rate,mean_episode_return,violation_rate,"
    "lambda,alpha_um,alpha_se,swu,wall_time";

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_field(const std::string& field, const std::string& path) {
  // strtod instead of stod: underflow to a subnormal sets ERANGE, which
  // stod escalates to an exception even though the correctly rounded
  // value is right there. Only overflow and non-numeric text are bad.
  const char* s = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(s, &end);
  const bool overflow = errno == ERANGE && std::abs(x) == HUGE_VAL;
  if (field.empty() || end != s + field.size() || overflow) {
    throw IoError("bad numeric field '" + field + "' in " + path);
  }
  return x;
}

}  // namespace

std::string format_metrics_row(const MetricsRow& r) {
  std::ostringstream out;
  out << r.env_steps << ',' << r.episodes << ',' << fmt(r.success_rate) << ','
      << fmt(r.mean_episode_return) << ',' << fmt(r.violation_rate) << ','
      << fmt(r.lambda) << ',' << fmt(r.alpha_um) << ',' << fmt(r.alpha_se)
      << ',' << fmt(r.swu) << ',' << fmt(r.wall_time);
  return out.str();
}

MetricsWriter::MetricsWriter(const std::string& path) : path_(path) {
  out_.open(path, std::ios::trunc);
  if (!out_) throw IoError("cannot open metrics file '" + path + "'");
  out_ << kMetricsHeader << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for metrics file '" + path + "'");
}

void MetricsWriter::emit(const MetricsRow& row) {
  out_ << format_metrics_row(row) << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed for metrics file '" + path_ + "'");
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metrics file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError("metrics file '" + path + "' is empty");
  }
  if (line == std::string(kMetricsHeader) + "\r") line.pop_back();
  if (line != kMetricsHeader) {
    throw ConfigError("metrics file '" + path +
                            "' has unexpected header '" + line + "'");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream split(line);
    std::string field;
    while (std::getline(split, field, ',')) fields.push_back(field);
    if (fields.size() != 10) {
      throw ConfigError("metrics row with " +
                              std::to_string(fields.size()) +
                              " fields (want 10) in " + path);
    }
    MetricsRow r;
    r.env_steps = static_cast<long>(parse_field(fields[0], path));
    r.episodes = static_cast<long>(parse_field(fields[1], path));
    r.success_rate = parse_field(fields[2], path);
    r.mean_episode_return = parse_field(fields[3], path);
    r.violation_rate = parse_field(fields[4], path);
    r.lambda = parse_field(fields[5], path);
    r.alpha_um = parse_field(fields[6], path);
    r.alpha_se = parse_field(fields[7], path);
    r.swu = parse_field(fields[8], path);
    r.wall_time = parse_field(fields[9], path);
    rows.push_back(r);
  }
  return rows;
}

double compute_swu(double target_rate, double measured_rate, double utility,
                   double utility_unconstrained) {
  if (utility_unconstrained <= 0.0) {
    throw Error("swu baseline utility must be > 0");
  }
  if (measured_rate < 0.0) throw Error("swu measured rate must be >= 0");
  double safety = 1.0;
  if (measured_rate > 0.0) {
    safety = std::min(1.0, target_rate / measured_rate);
  }
  return safety * (utility / utility_unconstrained);
}

}  // namespace seditor::train
