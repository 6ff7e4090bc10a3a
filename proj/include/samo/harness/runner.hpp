#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "samo/harness/checkpoint.hpp"
#include "samo/harness/config.hpp"

namespace samo::harness {

struct SeedSummary {
  std::uint64_t seed = 0;
  int options = 0;
  std::vector<bool> mature;
  std::int64_t env_steps = 0;
  std::int64_t episodes = 0;
  double final_window_mean = 0.0;
  bool resumed = false;
  double cpu_seconds = 0.0;  // CPU time of the thread that trained this seed
  std::vector<std::string> warnings;
};

struct RunSummary {
  std::string out_dir;
  std::vector<SeedSummary> seeds;
};

std::string metrics_path(const std::string& out_dir, std::uint64_t seed);
std::string checkpoint_path(const std::string& out_dir, std::uint64_t seed);

// Trains every seed (or only `only_seed`), writing metrics per episode and a
// checkpoint at each option freeze. An existing checkpoint is resumed.
RunSummary run_experiment(const RunConfig& config, const std::string& out_dir,
                          std::optional<std::uint64_t> only_seed = std::nullopt);

SeedSummary run_seed(const RunConfig& config, const std::string& out_dir, std::uint64_t seed);

struct EvalReport {
  int episodes = 0;
  double mean_length = 0.0;
  int min_length = 0;
  int max_length = 0;
  double mean_return = 0.0;
  double success_rate = 0.0;  // fraction of episodes ending at a goal
  std::vector<double> occupancy;  // per-option share of steps
};

// Runs the option cascade for `episodes` episodes. `env_name` must produce
// observations of the checkpoint's size.
EvalReport evaluate(const Checkpoint& ckpt, const std::string& env_name, int episodes, bool greedy,
                    std::uint64_t seed = 0);

// One episode as CSV rows step,x,y,theta,action,reward,active_option.
void export_trace(const Checkpoint& ckpt, const std::string& out_csv, std::uint64_t seed = 0,
                  bool greedy = true);

std::unique_ptr<envs::Env> env_for(const Checkpoint& ckpt, const std::string& env_name,
                                   std::uint64_t seed);

}  // namespace samo::harness
