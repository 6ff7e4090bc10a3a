#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "samo/cascade.hpp"
#include "samo/envs/env.hpp"
#include "samo/options.hpp"
#include "samo/sac.hpp"

namespace samo {

struct SamoConfig {
  double alpha_min = 0.1;
  double gamma_beta = 0.95;
  int max_options = 3;
  int t_min = 1;
  // Apply the t_min hold while a new option trains too, not only when the
  // finished set is executed.
  bool t_min_training = false;
  bool shaping = true;
  // Also BCE-train the first prefix function after its option freezes.
  bool bce_first = true;
  int bce_epochs = 20;
  int bce_batch = 32;
  std::int64_t step_budget = 50000;
  // Steps stored with uniform random actions before updates begin.
  int warmup = 1000;
  // Stop adding options once mean |V| over the label pool drops below this;
  // 0 disables the check.
  double value_stop = 0.0;
  // The final option keeps learning until the run's total budget is spent.
  bool continue_last = true;
  std::vector<int> beta_hidden = {64, 64};

  friend bool operator==(const SamoConfig&, const SamoConfig&) = default;
};

struct Progress {
  std::int64_t env_step = 0;
  std::int64_t episode = 0;
};

struct EpisodeRecord {
  std::int64_t env_step = 0;
  std::int64_t episode = 0;
  int length = 0;
  double ret = 0.0;
  double alpha = 0.0;
  std::vector<std::int64_t> option_hist;
  int option_count = 0;
  std::vector<std::string> events;
};

struct StepRecord {
  std::int64_t env_step = 0;
  std::vector<double> state;
  std::vector<double> action;
  double reward = 0.0;         // as returned by the env
  double stored_reward = 0.0;  // after shaping, when stored
  int active_option = 0;
  bool stored = false;
  envs::Outcome info = envs::Outcome::kNone;
};

struct OptionReport {
  int index = 0;
  std::int64_t steps = 0;
  std::int64_t stored = 0;
  std::int64_t delegated = 0;
  std::int64_t updates = 0;
  bool mature = false;
  double alpha = 0.0;
  bool bce_ran = false;
  options::BceResult bce;
  std::size_t pool_size = 0;
  double mean_abs_value = 0.0;
};

// Sequential option learner. Each new option trains with SAC on the states
// the frozen options cannot handle, then gets its own prefix termination
// function.
class Trainer {
 public:
  Trainer(envs::Env& env, sac::SacConfig sac, SamoConfig samo, std::size_t replay_capacity,
          std::uint64_t seed, std::int64_t total_steps);

  void on_episode(std::function<void(const EpisodeRecord&)> f) { episode_sink_ = std::move(f); }
  void on_step(std::function<void(const StepRecord&)> f) { step_sink_ = std::move(f); }
  void on_freeze(std::function<void(const options::OptionSet&, const Progress&)> f) {
    freeze_sink_ = std::move(f);
  }

  Progress& progress() { return progress_; }
  const Progress& progress() const { return progress_; }
  const std::vector<OptionReport>& reports() const { return reports_; }

  options::OptionSet empty_set() const;

  // Trains option set.size() + 1 and appends it with its prefix function.
  OptionReport train_option(options::OptionSet& set);

  // Continues from whatever set is given until max_options, the total step
  // budget or the value stop is reached.
  void train_all(options::OptionSet& set);
  options::OptionSet train_all();

 private:
  std::vector<double> random_action(Rng& rng) const;
  void collect_labels(const options::OptionSet& set, int k, options::LabelPool& pool, Rng& rng);
  void emit(EpisodeRecord rec);

  envs::Env& env_;
  sac::SacConfig sac_;
  SamoConfig samo_;
  std::size_t replay_capacity_;
  std::uint64_t seed_;
  std::int64_t total_steps_;
  Progress progress_;
  std::vector<OptionReport> reports_;
  std::vector<std::string> pending_events_;
  bool stop_ = false;

  std::function<void(const EpisodeRecord&)> episode_sink_;
  std::function<void(const StepRecord&)> step_sink_;
  std::function<void(const options::OptionSet&, const Progress&)> freeze_sink_;
};

}  // namespace samo
