#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

// Drives the installed binary end to end. The test runner exports
// SEDITOR_BIN=<path to the cli executable>.

namespace {

namespace fs = std::filesystem;

std::string binary() {
  const char* bin = std::getenv("SEDITOR_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "SEDITOR_BIN must point at the cli binary");
  return bin;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const fs::path& scratch) {
  const fs::path out_file = scratch / "stdout.txt";
  const fs::path err_file = scratch / "stderr.txt";
  const std::string cmd = binary() + " " + args + " > " + out_file.string() +
                          " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// Fresh scratch dir per test case; tiny-bandit config keeps runs fast.
struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name) {
    dir = fs::temp_directory_path() / ("seditor_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p;
  }
};

const char* kTinyBandit =
    "env = bandit\n"
    "agent = seditor\n"
    "total_steps = 200\n"
    "parallel_envs = 4\n"
    "train_interval = 5\n"
    "initial_rollout = 50\n"
    "buffer_capacity = 1000\n"
    "batch_size = 16\n"
    "hidden_units = 8\n"
    "hidden_layers = 1\n"
    "c = 0.01\n";

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// CSV comparison dropping the last field (wall_time is timing noise).
bool csv_equal_minus_wall_time(const fs::path& a, const fs::path& b) {
  const auto la = lines_of(slurp(a));
  const auto lb = lines_of(slurp(b));
  if (la.size() != lb.size()) return false;
  for (std::size_t i = 0; i < la.size(); ++i) {
    const auto ca = la[i].substr(0, la[i].rfind(','));
    const auto cb = lb[i].substr(0, lb[i].rfind(','));
    if (ca != cb) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cli: train rejects a config missing required keys") {
  Workspace ws("missing_key");
  const fs::path cfg = ws.write_config("bad.cfg", "env = bandit\n");
  const auto r = run("train --config " + cfg.string() + " --out " +
                         (ws.dir / "out").string(),
                     ws.dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("agent") != std::string::npos);
}

TEST_CASE("cli: train with zero steps leaves a parseable empty csv") {
  Workspace ws("zero_steps");
  std::string text = kTinyBandit;
  text.replace(text.find("total_steps = 200"), 17, "total_steps = 0  ");
  const fs::path cfg = ws.write_config("zero.cfg", text);
  const fs::path out = ws.dir / "out";
  const auto r = run("train --config " + cfg.string() + " --out " + out.string(),
                     ws.dir);
  CHECK(r.exit_code == 0);
  const auto csv = lines_of(slurp(out / "metrics.csv"));
  REQUIRE(csv.size() == 1);  // header only
  CHECK(csv[0].find("env_steps") == 0);
  CHECK(fs::exists(out / "summary.txt"));
  CHECK(fs::exists(out / "checkpoint_final.manifest"));
}

TEST_CASE("cli: identical train invocations agree except wall time") {
  Workspace ws("repeat");
  const fs::path cfg = ws.write_config("tiny.cfg", kTinyBandit);
  const fs::path out1 = ws.dir / "run1";
  const fs::path out2 = ws.dir / "run2";
  CHECK(run("train --config " + cfg.string() + " --out " + out1.string(),
            ws.dir)
            .exit_code == 0);
  CHECK(run("train --config " + cfg.string() + " --out " + out2.string(),
            ws.dir)
            .exit_code == 0);
  CHECK(csv_equal_minus_wall_time(out1 / "metrics.csv", out2 / "metrics.csv"));
  // A --seed override diverges.
  const fs::path out3 = ws.dir / "run3";
  CHECK(run("train --config " + cfg.string() + " --seed 9 --out " +
                out3.string(),
            ws.dir)
            .exit_code == 0);
  CHECK_FALSE(
      csv_equal_minus_wall_time(out1 / "metrics.csv", out3 / "metrics.csv"));
}

TEST_CASE("cli: eval writes per-episode rows and an aggregate line") {
  Workspace ws("eval");
  const fs::path cfg = ws.write_config("tiny.cfg", kTinyBandit);
  const fs::path out = ws.dir / "out";
  REQUIRE(run("train --config " + cfg.string() + " --out " + out.string(),
              ws.dir)
              .exit_code == 0);
  const std::string ck = (out / "checkpoint_final").string();
  const auto r = run("eval --checkpoint " + ck + " --episodes 5 --seed 7 --out " +
                         out.string(),
                     ws.dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("aggregate: success_rate=") != std::string::npos);
  CHECK(r.out.find("violation_rate=") != std::string::npos);
  const auto csv = lines_of(slurp(out / "eval.csv"));
  REQUIRE(csv.size() == 6);  // header + 5 episodes
  CHECK(csv[0] == "episode,steps,episode_return,violation_sum,success");
  // Same seed reproduces the file bit for bit.
  const fs::path out2 = ws.dir / "out2";
  const auto r2 = run("eval --checkpoint " + ck +
                          " --episodes 5 --seed 7 --out " + out2.string(),
                      ws.dir);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(out / "eval.csv") == slurp(out2 / "eval.csv"));
}

TEST_CASE("cli: plot renders polylines and the target line") {
  Workspace ws("plot");
  const fs::path cfg = ws.write_config("tiny.cfg", kTinyBandit);
  const fs::path out = ws.dir / "out";
  REQUIRE(run("train --config " + cfg.string() + " --out " + out.string(),
              ws.dir)
              .exit_code == 0);
  const fs::path svg = ws.dir / "plot.svg";
  const auto r = run("plot --csv " + (out / "metrics.csv").string() +
                         " --out " + svg.string() + " --config " + cfg.string(),
                     ws.dir);
  CHECK(r.exit_code == 0);
  const std::string body = slurp(svg);
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("<polyline") != std::string::npos);
  CHECK(body.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("cli: argument errors exit 2, runtime errors exit 1") {
  Workspace ws("errors");
  const fs::path cfg = ws.write_config("tiny.cfg", kTinyBandit);
  // Unknown flag.
  CHECK(run("train --config " + cfg.string() + " --turbo", ws.dir).exit_code ==
        2);
  // Missing subcommand.
  CHECK(run("", ws.dir).exit_code == 2);
  // --config and --checkpoint together.
  CHECK(run("train --config " + cfg.string() + " --checkpoint x", ws.dir)
            .exit_code == 2);
  // Neither.
  const auto neither = run("train", ws.dir);
  CHECK(neither.exit_code == 2);
  CHECK(neither.err.find("exactly one") != std::string::npos);
  // Seed override on resume is rejected.
  CHECK(run("train --checkpoint x --seed 3", ws.dir).exit_code == 2);
  // Evaluating a checkpoint that does not exist is a runtime failure.
  const auto r = run("eval --checkpoint /nonexistent/ck", ws.dir);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}
