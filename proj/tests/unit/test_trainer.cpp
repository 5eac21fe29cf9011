#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "seditor/train/config.hpp"
#include "seditor/train/trainer.hpp"
#include "seditor/util/error.hpp"

using namespace seditor;
using train::Trainer;
using train::TrainerConfig;

namespace {

namespace fs = std::filesystem;

// Tiny bandit profile: fast iterations, no gating surprises.
TrainerConfig bandit_cfg(long total_steps) {
  TrainerConfig cfg = TrainerConfig::parse(
      "env = bandit\n"
      "agent = seditor\n"
      "total_steps = " + std::to_string(total_steps) + "\n"
      "parallel_envs = 4\n"
      "train_interval = 5\n"
      "initial_rollout = 100\n"
      "buffer_capacity = 5000\n"
      "batch_size = 32\n"
      "hidden_units = 16\n"
      "hidden_layers = 1\n"
      "c = 0.01\n");
  return cfg;
}

bool rows_equal_ignoring_wall_time(const std::vector<train::MetricsRow>& a,
                                   const std::vector<train::MetricsRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].env_steps != b[i].env_steps) return false;
    if (a[i].episodes != b[i].episodes) return false;
    if (a[i].success_rate != b[i].success_rate) return false;
    if (a[i].mean_episode_return != b[i].mean_episode_return) return false;
    if (a[i].violation_rate != b[i].violation_rate) return false;
    if (a[i].lambda != b[i].lambda) return false;
    if (a[i].alpha_um != b[i].alpha_um) return false;
    if (a[i].alpha_se != b[i].alpha_se) return false;
    if (a[i].swu != b[i].swu) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("step accounting is exact") {
  Trainer t(bandit_cfg(400), "");
  t.run();
  // 400 total steps / (4 envs * 5 interval) = 20 iterations exactly.
  CHECK(t.env_steps() == 400);
  CHECK(t.iterations() == 20);
  // Bandit episodes are single steps: every step finishes one.
  CHECK(t.episode_count() == 400);
  CHECK(t.aborted_iterations() == 0);
  CHECK_FALSE(t.iteration());  // already complete
  CHECK(t.env_steps() == 400);
}

TEST_CASE("metrics rows cover disjoint exact windows") {
  Trainer t(bandit_cfg(200), "");
  t.run();
  REQUIRE(t.rows().size() == 10);  // one row per iteration by default
  long prev = 0;
  for (const auto& row : t.rows()) {
    CHECK(row.env_steps == prev + 20);
    prev = row.env_steps;
    // Window violation counts are integers: rate * window must land on
    // one at machine precision (the accounting invariant).
    const double count = row.violation_rate * 20.0;
    CHECK(count == double(long(count + 0.5)));
    CHECK(row.violation_rate >= 0.0);
    CHECK(row.violation_rate <= 1.0);
    // Bandit: every window closes episodes, so stats are always fresh.
    CHECK(row.mean_episode_return >= -1.0);
    CHECK(row.mean_episode_return <= 1.0);
  }
}

TEST_CASE("update gating holds until the buffer fills") {
  TrainerConfig cfg = bandit_cfg(200);
  cfg.initial_rollout = 100;
  Trainer t(cfg, "");
  // 20 steps per iteration: the first four iterations only collect.
  for (int i = 0; i < 5; ++i) {
    t.iteration();
    if (t.env_steps() < 100) {
      CHECK(t.last_stages().empty());
    }
  }
  // Buffer now holds >= 100: gradient + dual stages run, lambda first.
  CHECK(t.last_stages() == std::vector<std::string>{"lambda", "critic", "um",
                                                    "se", "entropy", "target"});
}

TEST_CASE("a budget the env cannot breach drives lambda to zero") {
  // Bandit rc is in [-1, 0], so with c = 2 the slack estimate
  // mean(rc) + c >= 1 stays positive every rollout: lambda must fall
  // strictly each iteration and end up near zero.
  TrainerConfig cfg = bandit_cfg(8000);
  cfg.c = 2.0;
  cfg.lr_lambda = 0.05;
  cfg.initial_rollout = 0;
  Trainer t(cfg, "");
  double prev = t.agent().lambda_value();
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
  while (t.iteration()) {
    const double now = t.agent().lambda_value();
    CHECK(now < prev);
    prev = now;
  }
  CHECK(t.agent().lambda_value() < 0.1);
}

TEST_CASE("identical configs produce identical runs") {
  Trainer a(bandit_cfg(300), "");
  Trainer b(bandit_cfg(300), "");
  a.run();
  b.run();
  CHECK(rows_equal_ignoring_wall_time(a.rows(), b.rows()));
  // And a different seed diverges.
  TrainerConfig other = bandit_cfg(300);
  other.seed = 1;
  Trainer c(other, "");
  c.run();
  CHECK_FALSE(rows_equal_ignoring_wall_time(a.rows(), c.rows()));
}

TEST_CASE("n-step batches train without disturbing accounting") {
  TrainerConfig cfg = bandit_cfg(200);
  cfg.n_step = 3;
  Trainer t(cfg, "");
  t.run();
  CHECK(t.env_steps() == 200);
  CHECK(t.rows().size() == 10);
}

TEST_CASE("metrics interval coarser than an iteration emits boundary rows") {
  TrainerConfig cfg = bandit_cfg(400);
  cfg.metrics_interval_steps = 100;  // five iterations per row
  Trainer t(cfg, "");
  t.run();
  REQUIRE(t.rows().size() == 4);
  CHECK(t.rows()[0].env_steps == 100);
  CHECK(t.rows()[3].env_steps == 400);
}

TEST_CASE("checkpoint resume continues the exact run") {
  const fs::path dir = fs::temp_directory_path() / "seditor_resume_test";
  fs::create_directories(dir);
  const std::string prefix = (dir / "mid").string();

  // Unbroken reference run.
  Trainer full(bandit_cfg(300), "");
  full.run();

  // Split run: stop at 140 steps, checkpoint, resume to completion.
  Trainer part(bandit_cfg(300), "");
  while (part.env_steps() < 140) part.iteration();
  part.save_checkpoint(prefix);
  Trainer resumed(prefix, "");
  while (resumed.iteration()) {
  }

  CHECK(resumed.env_steps() == 300);
  // Rows after the split must match the unbroken run's tail bit for bit.
  const auto& ref = full.rows();
  const auto& tail = resumed.rows();
  REQUIRE(ref.size() == 15);
  REQUIRE(tail.size() == 8);  // rows 8..15 of the reference
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const auto& want = ref[i + 7];
    const auto& got = tail[i];
    CHECK(got.env_steps == want.env_steps);
    CHECK(got.violation_rate == want.violation_rate);
    CHECK(got.lambda == want.lambda);
    CHECK(got.alpha_um == want.alpha_um);
    CHECK(got.swu == want.swu);
  }
  fs::remove_all(dir);
}

TEST_CASE("out_dir runs write csv, summary, and final checkpoint") {
  const fs::path dir = fs::temp_directory_path() / "seditor_outdir_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Trainer t(bandit_cfg(100), dir.string());
  t.run();
  CHECK(fs::exists(dir / "metrics.csv"));
  CHECK(fs::exists(dir / "summary.txt"));
  CHECK(fs::exists(dir / "checkpoint_final.manifest"));
  CHECK(fs::exists(dir / "checkpoint_final.blob"));
  const auto rows = train::read_metrics_csv((dir / "metrics.csv").string());
  CHECK(rows.size() == t.rows().size());
  fs::remove_all(dir);
}

TEST_CASE("evaluate_checkpoint reports per-episode stats") {
  const fs::path dir = fs::temp_directory_path() / "seditor_eval_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string prefix = (dir / "ck").string();
  Trainer t(bandit_cfg(200), "");
  t.run();
  t.save_checkpoint(prefix);

  const auto report = train::evaluate_checkpoint(prefix, 8, std::nullopt);
  REQUIRE(report.episodes.size() == 8);
  for (const auto& ep : report.episodes) {
    CHECK(ep.steps == 1);  // bandit episodes are one step
    CHECK(ep.episode_return >= -1.0);
    CHECK(ep.episode_return <= 1.0);
  }
  // Same seed: identical report. Different seed: usually different.
  const auto again = train::evaluate_checkpoint(prefix, 8, std::nullopt);
  CHECK(again.mean_return == report.mean_return);
  CHECK(again.violation_rate == report.violation_rate);

  CHECK_THROWS_AS(train::evaluate_checkpoint(prefix, 0, std::nullopt),
                  ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("sac and sac_lag at lambda zero are bit-identical end to end") {
  TrainerConfig a = bandit_cfg(300);
  a.agent = "sac";
  TrainerConfig b = bandit_cfg(300);
  b.agent = "sac_lag";
  b.initial_lambda = 0.0;
  Trainer ta(a, "");
  Trainer tb(b, "");
  ta.run();
  tb.run();
  CHECK(rows_equal_ignoring_wall_time(ta.rows(), tb.rows()));
}

TEST_CASE("unknown env or resume prefix fail loudly") {
  TrainerConfig cfg;
  cfg.env = "mars";
  CHECK_THROWS_AS(train::make_env(cfg), ConfigError);
  CHECK_THROWS_AS(Trainer("/nonexistent/prefix", ""), CheckpointError);
}
