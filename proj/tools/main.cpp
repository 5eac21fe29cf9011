#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seditor/train/config.hpp"
#include "seditor/train/plot.hpp"
#include "seditor/train/trainer.hpp"
#include "seditor/util/error.hpp"
#include "seditor/util/log.hpp"

namespace {

namespace fs = std::filesystem;
using seditor::train::TrainerConfig;

int cmd_train(const std::string& config_path, const std::string& checkpoint,
              const std::string& out_dir, std::optional<std::uint64_t> seed,
              std::optional<long> steps) {
  if (config_path.empty() == checkpoint.empty()) {
    throw seditor::ConfigError(
        "train needs exactly one of --config or --checkpoint");
  }
  fs::create_directories(out_dir);
  if (!checkpoint.empty()) {
    if (seed || steps) {
      throw seditor::ConfigError(
          "--seed/--steps cannot override a resumed checkpoint's config");
    }
    seditor::train::Trainer trainer(checkpoint, out_dir);
    trainer.run();
    return 0;
  }
  TrainerConfig cfg = TrainerConfig::load_file(config_path);
  if (seed) cfg.seed = *seed;
  if (steps) cfg.total_steps = *steps;
  cfg.validate();
  seditor::train::Trainer trainer(cfg, out_dir);
  trainer.run();
  seditor::log::info("[train] done: %ld env steps, %ld episodes, %ld aborts",
                     trainer.env_steps(), trainer.episode_count(),
                     trainer.aborted_iterations());
  return 0;
}

int cmd_eval(const std::string& checkpoint, int episodes,
             std::optional<std::uint64_t> seed, const std::string& out_dir) {
  const seditor::train::EvalReport report =
      seditor::train::evaluate_checkpoint(checkpoint, episodes, seed);
  const char* header = "episode,steps,episode_return,violation_sum,success";
  std::cout << header << '\n';
  for (std::size_t e = 0; e < report.episodes.size(); ++e) {
    const auto& ep = report.episodes[e];
    std::printf("%zu,%ld,%.17g,%.17g,%d\n", e, ep.steps, ep.episode_return,
                ep.violation_sum, ep.success ? 1 : 0);
  }
  std::printf("aggregate: success_rate=%.17g mean_return=%.17g violation_rate=%.17g\n",
              report.success_rate, report.mean_return, report.violation_rate);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string path = out_dir + "/eval.csv";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw seditor::IoError("cannot write " + path);
    out << header << '\n';
    for (std::size_t e = 0; e < report.episodes.size(); ++e) {
      const auto& ep = report.episodes[e];
      char line[160];
      std::snprintf(line, sizeof line, "%zu,%ld,%.17g,%.17g,%d", e, ep.steps,
                    ep.episode_return, ep.violation_sum, ep.success ? 1 : 0);
      out << line << '\n';
    }
    if (!out) throw seditor::IoError("write failed for " + path);
  }
  return 0;
}

int cmd_plot(const std::vector<std::string>& csv_paths,
             const std::string& out_svg, const std::string& config_path) {
  std::optional<double> target;
  if (!config_path.empty()) {
    target = TrainerConfig::load_file(config_path).c;
  }
  std::vector<seditor::train::PlotSeries> series;
  for (const std::string& path : csv_paths) {
    seditor::train::PlotSeries s;
    s.label = fs::path(path).stem().string();
    s.rows = seditor::train::read_metrics_csv(path);
    series.push_back(std::move(s));
  }
  const std::string svg = seditor::train::render_metrics_svg(series, target);
  std::ofstream out(out_svg, std::ios::trunc);
  if (!out) throw seditor::IoError("cannot write " + out_svg);
  out << svg;
  if (!out) throw seditor::IoError("write failed for " + out_svg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained RL trainer with a two-policy safety editor"};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint;
  std::string out_dir = ".";
  std::string out_svg = "metrics.svg";
  std::optional<std::uint64_t> seed;
  std::optional<long> steps;
  int episodes = 10;
  std::vector<std::string> csv_paths;

  CLI::App* train = app.add_subcommand("train", "Train an agent");
  train->add_option("--config", config_path, "Config file (key = value lines)");
  train->add_option("--checkpoint", checkpoint, "Checkpoint prefix to resume");
  train->add_option("--seed", seed, "Master seed override");
  train->add_option("--steps", steps, "total_steps override");
  train->add_option("--out", out_dir, "Output directory");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint prefix")->required();
  eval->add_option("--episodes", episodes, "Episode count");
  eval->add_option("--seed", seed, "Evaluation seed (default: config seed)");
  eval->add_option("--out", out_dir, "Directory for eval.csv (optional)");

  CLI::App* plot = app.add_subcommand("plot", "Render metrics CSVs to SVG");
  plot->add_option("--csv", csv_paths, "Metrics CSV (repeatable)")->required();
  plot->add_option("--out", out_svg, "Output SVG path");
  plot->add_option("--config", config_path,
                   "Config supplying the violation target line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) {
      return cmd_train(config_path, checkpoint, out_dir, seed, steps);
    }
    if (eval->parsed()) {
      const std::string dir = eval->count("--out") ? out_dir : "";
      return cmd_eval(checkpoint, episodes, seed, dir);
    }
    return cmd_plot(csv_paths, out_svg,
                    plot->count("--config") ? config_path : "");
  } catch (const seditor::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
