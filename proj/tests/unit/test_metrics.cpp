#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "seditor/train/metrics.hpp"
#include "seditor/util/error.hpp"

using namespace seditor;
using train::MetricsRow;
using train::MetricsWriter;
using train::compute_swu;
using train::read_metrics_csv;

namespace {

std::filesystem::path temp_csv(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

MetricsRow sample_row() {
  MetricsRow row;
  row.env_steps = 12345;
  row.episodes = 67;
  row.success_rate = 0.1;  // deliberately not exactly representable
  row.mean_episode_return = -3.14159265358979312;
  row.violation_rate = 1e-17;
  row.lambda = 0.5413248546129181;
  row.alpha_um = 1234567.89;
  row.alpha_se = 1e-300;
  row.swu = 0.9999999999999999;
  row.wall_time = 42.125;
  return row;
}

}  // namespace

TEST_CASE("rows round-trip through the csv bit for bit") {
  const auto path = temp_csv("metrics_roundtrip.csv");
  {
    MetricsWriter w(path.string());
    w.emit(sample_row());
    MetricsRow second = sample_row();
    second.env_steps = 20000;
    second.violation_rate = 0.0;
    w.emit(second);
  }
  const std::vector<MetricsRow> rows = read_metrics_csv(path.string());
  REQUIRE(rows.size() == 2);
  const MetricsRow want = sample_row();
  CHECK(rows[0].env_steps == want.env_steps);
  CHECK(rows[0].episodes == want.episodes);
  CHECK(rows[0].success_rate == want.success_rate);
  CHECK(rows[0].mean_episode_return == want.mean_episode_return);
  CHECK(rows[0].violation_rate == want.violation_rate);
  CHECK(rows[0].lambda == want.lambda);
  CHECK(rows[0].alpha_um == want.alpha_um);
  CHECK(rows[0].alpha_se == want.alpha_se);
  CHECK(rows[0].swu == want.swu);
  CHECK(rows[0].wall_time == want.wall_time);
  CHECK(rows[1].env_steps == 20000);
  CHECK(rows[1].violation_rate == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("writer truncates stale files and emits the header") {
  const auto path = temp_csv("metrics_truncate.csv");
  {
    std::ofstream out(path);
    out << "stale garbage\n";
  }
  { MetricsWriter w(path.string()); }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == train::kMetricsHeader);
  CHECK_FALSE(std::getline(in, line));  // header only
  CHECK(read_metrics_csv(path.string()).empty());
  std::filesystem::remove(path);
}

TEST_CASE("reader rejects missing, empty, and malformed files") {
  CHECK_THROWS_AS(read_metrics_csv("/nonexistent/metrics.csv"), IoError);

  const auto empty = temp_csv("metrics_empty.csv");
  { std::ofstream out(empty); }
  CHECK_THROWS_AS(read_metrics_csv(empty.string()), IoError);
  std::filesystem::remove(empty);

  const auto badhdr = temp_csv("metrics_badhdr.csv");
  {
    std::ofstream out(badhdr);
    out << "env_steps,episodes\n1,2\n";
  }
  CHECK_THROWS_AS(read_metrics_csv(badhdr.string()), ConfigError);
  std::filesystem::remove(badhdr);

  const auto badrow = temp_csv("metrics_badrow.csv");
  {
    std::ofstream out(badrow);
    out << train::kMetricsHeader << "\n1,2,3\n";
  }
  CHECK_THROWS_AS(read_metrics_csv(badrow.string()), ConfigError);
  std::filesystem::remove(badrow);
}

TEST_CASE("reader tolerates trailing carriage returns") {
  const auto path = temp_csv("metrics_crlf.csv");
  {
    std::ofstream out(path);
    out << train::kMetricsHeader << "\r\n";
    out << "10,1,0.5,1.25,0,1,1,1,0.5,0.1\r\n";
  }
  const auto rows = read_metrics_csv(path.string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].env_steps == 10);
  CHECK(rows[0].success_rate == 0.5);
  std::filesystem::remove(path);
}

TEST_CASE("swu worked examples") {
  // Measured violation at twice the target halves the utility.
  CHECK(compute_swu(5e-4, 1e-3, 0.8, 1.0) == 0.4);
  // At or under target: full utility passes through.
  CHECK(compute_swu(5e-4, 5e-4, 0.8, 1.0) == 0.8);
  CHECK(compute_swu(5e-4, 1e-4, 0.8, 1.0) == 0.8);
  // A perfectly clean run scores the utility itself.
  CHECK(compute_swu(5e-4, 0.0, 0.8, 1.0) == 0.8);
  // Baseline rescales.
  CHECK(compute_swu(5e-4, 0.0, 0.8, 2.0) == 0.4);
  // Zero utility is zero regardless of safety.
  CHECK(compute_swu(5e-4, 1e-9, 0.0, 1.0) == 0.0);
}

TEST_CASE("swu input validation") {
  CHECK_THROWS_AS(compute_swu(5e-4, 1e-3, 0.8, 0.0), Error);
  CHECK_THROWS_AS(compute_swu(5e-4, 1e-3, 0.8, -1.0), Error);
  CHECK_THROWS_AS(compute_swu(5e-4, -1e-3, 0.8, 1.0), Error);
}

TEST_CASE("format parses back exactly for extreme doubles") {
  MetricsRow row = sample_row();
  row.mean_episode_return = 1.7976931348623157e308;   // near DBL_MAX
  row.violation_rate = 4.9406564584124654e-324;       // denormal min
  const std::string line = train::format_metrics_row(row);
  const auto path = temp_csv("metrics_extreme.csv");
  {
    std::ofstream out(path);
    out << train::kMetricsHeader << "\n" << line << "\n";
  }
  const auto rows = read_metrics_csv(path.string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_episode_return == row.mean_episode_return);
  CHECK(rows[0].violation_rate == row.violation_rate);
  std::filesystem::remove(path);
}
