#include "seditor/train/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "seditor/util/error.hpp"

namespace seditor::train {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                            value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long x = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                            value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const long x = parse_long(key, value);
  if (x < -2147483647L || x > 2147483647L) {
    throw ConfigError("config key '" + key + "': value out of range");
  }
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key +
                            "': expected an unsigned integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" +
                          value + "'");
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

TrainerConfig TrainerConfig::parse(const std::string& text) {
  TrainerConfig cfg;
  std::set<std::string> seen;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config key '" + key + "' given twice");
    }

    if (key == "env") cfg.env = value;
    else if (key == "agent") cfg.agent = value;
    else if (key == "total_steps") cfg.total_steps = parse_long(key, value);
    else if (key == "edit_mode") cfg.edit_mode = value;
    else if (key == "distance_mode") cfg.distance_mode = value;
    else if (key == "head") cfg.head = value;
    else if (key == "actor_width") cfg.actor_width = parse_int(key, value);
    else if (key == "hidden_layers") cfg.hidden_layers = parse_int(key, value);
    else if (key == "hidden_units") cfg.hidden_units = parse_int(key, value);
    else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "c") cfg.c = parse_double(key, value);
    else if (key == "lr") cfg.lr = parse_double(key, value);
    else if (key == "lr_lambda") cfg.lr_lambda = parse_double(key, value);
    else if (key == "tau") cfg.tau = parse_double(key, value);
    else if (key == "entropy_target_um") cfg.entropy_target_um = parse_double(key, value);
    else if (key == "entropy_target_se") cfg.entropy_target_se = parse_double(key, value);
    else if (key == "initial_lambda") cfg.initial_lambda = parse_double(key, value);
    else if (key == "twin_q") cfg.twin_q = parse_bool(key, value);
    else if (key == "simple_lambda_rule") cfg.simple_lambda_rule = parse_bool(key, value);
    else if (key == "min_concentration") cfg.min_concentration = parse_double(key, value);
    else if (key == "batch_size") cfg.batch_size = parse_int(key, value);
    else if (key == "parallel_envs") cfg.parallel_envs = parse_int(key, value);
    else if (key == "train_interval") cfg.train_interval = parse_int(key, value);
    else if (key == "initial_rollout") cfg.initial_rollout = parse_long(key, value);
    else if (key == "buffer_capacity") cfg.buffer_capacity = parse_long(key, value);
    else if (key == "n_step") cfg.n_step = parse_int(key, value);
    else if (key == "normalizer_decay") cfg.normalizer_decay = parse_double(key, value);
    else if (key == "normalizer_clip") cfg.normalizer_clip = parse_double(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "metrics_interval_steps") cfg.metrics_interval_steps = parse_long(key, value);
    else if (key == "checkpoint_interval_steps") cfg.checkpoint_interval_steps = parse_long(key, value);
    else if (key == "swu_baseline_utility") cfg.swu_baseline_utility = parse_double(key, value);
    else if (key == "utility_metric") cfg.utility_metric = value;
    else if (key == "horizon") cfg.horizon = parse_int(key, value);
    else if (key == "hazard_count") cfg.hazard_count = parse_int(key, value);
    else if (key == "lidar_bins") cfg.lidar_bins = parse_int(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }

  for (const char* required : {"env", "agent", "total_steps"}) {
    if (!seen.count(required)) {
      throw ConfigError(std::string("missing required config key '") +
                              required + "'");
    }
  }
  cfg.validate();
  return cfg;
}

TrainerConfig TrainerConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

std::string TrainerConfig::to_text() const {
  std::ostringstream out;
  out << "env = " << env << '\n';
  out << "agent = " << agent << '\n';
  out << "total_steps = " << total_steps << '\n';
  out << "edit_mode = " << edit_mode << '\n';
  out << "distance_mode = " << distance_mode << '\n';
  out << "head = " << head << '\n';
  out << "actor_width = " << actor_width << '\n';
  out << "hidden_layers = " << hidden_layers << '\n';
  out << "hidden_units = " << hidden_units << '\n';
  out << "gamma = " << fmt_double(gamma) << '\n';
  out << "c = " << fmt_double(c) << '\n';
  out << "lr = " << fmt_double(lr) << '\n';
  out << "lr_lambda = " << fmt_double(lr_lambda) << '\n';
  out << "tau = " << fmt_double(tau) << '\n';
  out << "entropy_target_um = " << fmt_double(entropy_target_um) << '\n';
  out << "entropy_target_se = " << fmt_double(entropy_target_se) << '\n';
  out << "initial_lambda = " << fmt_double(initial_lambda) << '\n';
  out << "twin_q = " << (twin_q ? "true" : "false") << '\n';
  out << "simple_lambda_rule = " << (simple_lambda_rule ? "true" : "false") << '\n';
  out << "min_concentration = " << fmt_double(min_concentration) << '\n';
  out << "batch_size = " << batch_size << '\n';
  out << "parallel_envs = " << parallel_envs << '\n';
  out << "train_interval = " << train_interval << '\n';
  out << "initial_rollout = " << initial_rollout << '\n';
  out << "buffer_capacity = " << buffer_capacity << '\n';
  out << "n_step = " << n_step << '\n';
  out << "normalizer_decay = " << fmt_double(normalizer_decay) << '\n';
  out << "normalizer_clip = " << fmt_double(normalizer_clip) << '\n';
  out << "seed = " << seed << '\n';
  out << "metrics_interval_steps = " << metrics_interval_steps << '\n';
  out << "checkpoint_interval_steps = " << checkpoint_interval_steps << '\n';
  out << "swu_baseline_utility = " << fmt_double(swu_baseline_utility) << '\n';
  out << "utility_metric = " << utility_metric << '\n';
  out << "horizon = " << horizon << '\n';
  out << "hazard_count = " << hazard_count << '\n';
  out << "lidar_bins = " << lidar_bins << '\n';
  return out.str();
}

void TrainerConfig::validate() const {
  auto bad = [](const std::string& what) -> void {
    throw ConfigError("config: " + what);
  };
  if (env != "bandit" && env != "pointnav") bad("env must be bandit or pointnav, got '" + env + "'");
  if (agent != "seditor" && agent != "sac" && agent != "sac_lag") {
    bad("agent must be seditor, sac or sac_lag, got '" + agent + "'");
  }
  if (total_steps < 0) bad("total_steps must be >= 0");
  if (edit_mode != "additive" && edit_mode != "overwrite") {
    bad("edit_mode must be additive or overwrite, got '" + edit_mode + "'");
  }
  if (distance_mode != "hinge" && distance_mode != "l2") {
    bad("distance_mode must be hinge or l2, got '" + distance_mode + "'");
  }
  if (head != "beta" && head != "squashed_gaussian") {
    bad("head must be beta or squashed_gaussian, got '" + head + "'");
  }
  if (actor_width < 1) bad("actor_width must be >= 1");
  if (hidden_layers < 1) bad("hidden_layers must be >= 1");
  if (hidden_units < 1) bad("hidden_units must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) bad("gamma must be in [0, 1)");
  if (c < 0.0) bad("c must be >= 0");
  if (lr <= 0.0) bad("lr must be > 0");
  if (lr_lambda < 0.0) bad("lr_lambda must be >= 0");
  if (!(tau > 0.0 && tau <= 1.0)) bad("tau must be in (0, 1]");
  if (initial_lambda < 0.0) bad("initial_lambda must be >= 0");
  if (min_concentration < 0.0) bad("min_concentration must be >= 0");
  if (batch_size < 1) bad("batch_size must be >= 1");
  if (parallel_envs < 1) bad("parallel_envs must be >= 1");
  if (train_interval < 1) bad("train_interval must be >= 1");
  if (initial_rollout < 0) bad("initial_rollout must be >= 0");
  if (buffer_capacity < 1) bad("buffer_capacity must be >= 1");
  if (n_step < 1) bad("n_step must be >= 1");
  if (!(normalizer_decay >= 0.0 && normalizer_decay < 1.0)) bad("normalizer_decay must be in [0, 1)");
  if (normalizer_clip <= 0.0) bad("normalizer_clip must be > 0");
  if (metrics_interval_steps < 0) bad("metrics_interval_steps must be >= 0");
  if (checkpoint_interval_steps < 0) bad("checkpoint_interval_steps must be >= 0");
  if (swu_baseline_utility <= 0.0) bad("swu_baseline_utility must be > 0");
  if (utility_metric != "return" && utility_metric != "success") {
    bad("utility_metric must be return or success, got '" + utility_metric + "'");
  }
  if (horizon < 1) bad("horizon must be >= 1");
  if (hazard_count < 0) bad("hazard_count must be >= 0");
  if (lidar_bins < 1) bad("lidar_bins must be >= 1");
}

}  // namespace seditor::train
